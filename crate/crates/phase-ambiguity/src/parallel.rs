//! Deterministic chunked parallelism for the embarrassingly parallel loops.
//!
//! Results are concatenated in chunk order, so the output is identical for
//! any thread count. `PHASE_AMBIGUITY_THREADS` caps the number of worker
//! threads (0 or unset = one per available core).

pub(crate) fn thread_count() -> usize {
    let configured = std::env::var("PHASE_AMBIGUITY_THREADS")
        .ok()
        .and_then(|s| s.parse::<usize>().ok())
        .unwrap_or(0);
    if configured > 0 {
        configured
    } else {
        std::thread::available_parallelism()
            .map(|n| n.get())
            .unwrap_or(1)
    }
}

/// Splits `0..total` into contiguous ranges, maps each with `f`, and
/// concatenates the per-range outputs in range order.
pub(crate) fn map_ranges<T, F>(total: usize, min_parallel: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(std::ops::Range<usize>) -> Vec<T> + Sync,
{
    let threads = thread_count();
    if total < min_parallel || threads <= 1 {
        return f(0..total);
    }
    let chunk = total.div_ceil(threads);
    let ranges: Vec<_> = (0..threads)
        .map(|t| (t * chunk).min(total)..((t + 1) * chunk).min(total))
        .filter(|r| !r.is_empty())
        .collect();
    std::thread::scope(|scope| {
        let handles: Vec<_> = ranges
            .into_iter()
            .map(|range| scope.spawn(|| f(range)))
            .collect();
        let mut out = Vec::with_capacity(total);
        for handle in handles {
            out.extend(handle.join().expect("worker thread panicked"));
        }
        out
    })
}
