//! Shared test helpers: deterministic samplers and an independent oracle for
//! root flipping and polynomial expansion.
//!
//! The oracle deliberately avoids the library's code paths: expansion goes
//! through evaluation at roots of unity plus an inverse DFT instead of
//! iterated factor multiplication, and the flip map is written from the
//! β/|β|² identity rather than shared helpers.

#![allow(dead_code)]

use num_complex::Complex64;
use phase_ambiguity::Signal;
use rand::{Rng, RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A root with modulus in [0.35, 0.9] ∪ [1.1, 1.9]: bounded away from zero
/// and from the unit circle, so flips are generic.
pub fn sample_off_circle_root(rng: &mut impl Rng) -> Complex64 {
    let u: f64 = rng.random();
    let modulus = if rng.random::<f64>() < 0.5 {
        0.35 + 0.55 * u
    } else {
        1.1 + 0.8 * u
    };
    let angle = 2.0 * std::f64::consts::PI * rng.random::<f64>();
    Complex64::from_polar(modulus, angle)
}

/// Leading coefficient plus n generic off-circle roots.
pub fn sample_root_data(rng: &mut impl Rng, n: usize) -> (Complex64, Vec<Complex64>) {
    let leading = Complex64::from_polar(
        0.5 + rng.random::<f64>(),
        2.0 * std::f64::consts::PI * rng.random::<f64>(),
    );
    let roots = (0..n).map(|_| sample_off_circle_root(rng)).collect();
    (leading, roots)
}

/// Oracle expansion of a₀·Π(ω − βᵢ): evaluate at the (n+1)-th roots of unity
/// and invert the DFT. Exact for a degree-n polynomial.
pub fn oracle_expand(leading: Complex64, roots: &[Complex64]) -> Vec<Complex64> {
    let m = roots.len() + 1;
    let values: Vec<Complex64> = (0..m)
        .map(|j| {
            let w = Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * j as f64 / m as f64);
            roots.iter().fold(leading, |acc, &b| acc * (w - b))
        })
        .collect();
    (0..m)
        .map(|k| {
            let mut c = Complex64::new(0.0, 0.0);
            for (j, v) in values.iter().enumerate() {
                let w = Complex64::from_polar(
                    1.0,
                    -2.0 * std::f64::consts::PI * (j * k % m) as f64 / m as f64,
                );
                c += v * w;
            }
            c / m as f64
        })
        .collect()
}

/// Oracle flip: β ↦ β/|β|² (= 1/conj(β)) on the mask's slots, leading scalar
/// multiplied by |β| per flipped slot.
pub fn oracle_flip(
    leading: Complex64,
    roots: &[Complex64],
    mask: u32,
) -> (Complex64, Vec<Complex64>) {
    let mut lead = leading;
    let flipped = roots
        .iter()
        .enumerate()
        .map(|(i, &b)| {
            if mask & (1 << i) != 0 {
                lead *= b.norm();
                b / b.norm_sqr()
            } else {
                b
            }
        })
        .collect();
    (lead, flipped)
}

/// Oracle phase alignment: rotate so the first coordinate is positive real.
pub fn oracle_canonical(v: &[Complex64]) -> Vec<Complex64> {
    let phase = v[0].conj() / v[0].norm();
    v.iter().map(|c| c * phase).collect()
}

pub fn max_norm(v: &[Complex64]) -> f64 {
    v.iter().map(|c| c.norm()).fold(0.0, f64::max)
}

pub fn max_distance(a: &[Complex64], b: &[Complex64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

/// A generic full-support signal built away from every degenerate locus,
/// returned with the root data that generated it.
pub fn sample_generic_signal(rng: &mut impl Rng, n: usize) -> (Signal, Complex64, Vec<Complex64>) {
    let (leading, roots) = sample_root_data(rng, n);
    let signal =
        Signal::new(oracle_expand(leading, &roots)).expect("generic roots give full support");
    (signal, leading, roots)
}
