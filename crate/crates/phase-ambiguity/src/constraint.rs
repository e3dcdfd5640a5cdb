//! Witness checking and Monte-Carlo genericity tests for algebraic side
//! constraints that restore uniqueness of phase retrieval, including the
//! fixed-last-modulus recovery and the short-time-Fourier-style quadratic
//! constraint on signal triples.

use num_complex::Complex64;
use rand::{Rng, RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::config::Config;
use crate::enumeration::{
    candidates_from_intensity, enumerate_candidates, CandidateSet, CLASS_TOL,
};
use crate::error::{Error, Result};
use crate::parallel;
use crate::roots::FlipMask;
use crate::signal::{trivial_equivalent, IntensitySpectrum, PhaseClassRep, Signal};

/// Which candidate tuples count as trivially related to the witness and are
/// excluded from violation checking.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum WitnessMode {
    /// Recovery up to global phase: tuples whose every component mask is
    /// empty or full (componentwise identity or reflect-conjugation) are
    /// trivial.
    ModGlobalPhase,
    /// Recovery up to trivial ambiguities: only the all-empty tuple is
    /// excluded.
    ModTrivial,
}

pub type PredicateFn = dyn Fn(&[&Signal], f64) -> bool + Send + Sync;
pub type SamplerFn = dyn Fn(u64) -> Result<Vec<Signal>> + Send + Sync;

/// An algebraic subvariety of (tuples of) signal space, described by a
/// predicate with tolerance and a seeded sampler of member tuples.
pub struct ConstraintSystem {
    lengths: Vec<usize>,
    predicate: Box<PredicateFn>,
    sampler: Box<SamplerFn>,
    description: String,
}

impl std::fmt::Debug for ConstraintSystem {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("ConstraintSystem")
            .field("lengths", &self.lengths)
            .field("description", &self.description)
            .finish()
    }
}

impl ConstraintSystem {
    /// `lengths` holds the component signal lengths N₁+1, …, N_m+1.
    pub fn new(
        lengths: Vec<usize>,
        description: impl Into<String>,
        predicate: Box<PredicateFn>,
        sampler: Box<SamplerFn>,
    ) -> Self {
        assert!(!lengths.is_empty() && lengths.iter().all(|&l| l >= 2));
        ConstraintSystem {
            lengths,
            predicate,
            sampler,
            description: description.into(),
        }
    }

    pub fn arity(&self) -> usize {
        self.lengths.len()
    }

    pub fn lengths(&self) -> &[usize] {
        &self.lengths
    }

    pub fn description(&self) -> &str {
        &self.description
    }

    pub fn predicate(&self, tuple: &[&Signal], tol: f64) -> bool {
        (self.predicate)(tuple, tol)
    }

    /// Draws one member tuple; identical seeds give identical tuples.
    pub fn sample(&self, seed: u64) -> Result<Vec<Signal>> {
        let tuple = (self.sampler)(seed)?;
        if tuple.len() != self.lengths.len()
            || tuple
                .iter()
                .zip(&self.lengths)
                .any(|(signal, &len)| signal.len() != len)
        {
            return Err(Error::Constraint(
                "sampler produced a tuple with wrong lengths".into(),
            ));
        }
        Ok(tuple)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum WitnessConclusion {
    WitnessHolds,
    WitnessFails,
}

/// A nontrivial candidate tuple that still satisfies the constraint.
#[derive(Debug, Clone, Serialize)]
pub struct ViolatingPair {
    pub masks: Vec<FlipMask>,
    pub candidates: Vec<PhaseClassRep>,
}

/// Result of exhaustively checking a witness tuple against every nontrivial
/// combination of per-component flips.
#[derive(Debug, Clone)]
pub struct WitnessReport {
    pub witness: Vec<Signal>,
    pub total_pairs_checked: usize,
    pub violating_pairs: Vec<ViolatingPair>,
    pub conclusion: WitnessConclusion,
    pub mode: WitnessMode,
}

impl WitnessReport {
    pub fn holds(&self) -> bool {
        self.conclusion == WitnessConclusion::WitnessHolds
    }
}

impl Serialize for WitnessReport {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut s = serializer.serialize_struct("WitnessReport", 5)?;
        s.serialize_field("witness", &self.witness)?;
        s.serialize_field("total_pairs_checked", &self.total_pairs_checked)?;
        s.serialize_field("violating_pairs", &self.violating_pairs)?;
        s.serialize_field(
            "conclusion",
            match self.conclusion {
                WitnessConclusion::WitnessHolds => "WitnessHolds",
                WitnessConclusion::WitnessFails => "WitnessFails",
            },
        )?;
        s.serialize_field("mode", &self.mode)?;
        s.end()
    }
}

/// Spawn threads only for sweeps at least this large.
const MIN_PARALLEL_TUPLES: usize = 1 << 12;

fn is_excluded(masks: &[FlipMask], degrees: &[usize], mode: WitnessMode) -> bool {
    match mode {
        WitnessMode::ModTrivial => masks.iter().all(|m| m.bits() == 0),
        WitnessMode::ModGlobalPhase => masks
            .iter()
            .zip(degrees)
            .all(|(m, &n)| m.bits() == 0 || *m == FlipMask::full(n)),
    }
}

/// Enumerates every combination of per-component flip candidates of `w0`,
/// skips the combinations that are trivial for the chosen mode, and records
/// each remaining tuple that still satisfies the constraint.
///
/// `w0` must satisfy the constraint at `tol`; the witness holds exactly when
/// no violation is found.
pub fn check_witness(
    c: &ConstraintSystem,
    w0: &[Signal],
    mode: WitnessMode,
    tol: f64,
    cfg: &Config,
) -> Result<WitnessReport> {
    if w0.len() != c.arity()
        || w0
            .iter()
            .zip(c.lengths())
            .any(|(signal, &len)| signal.len() != len)
    {
        return Err(Error::Constraint(format!(
            "witness lengths {:?} do not match the constraint's {:?}",
            w0.iter().map(Signal::len).collect::<Vec<_>>(),
            c.lengths()
        )));
    }
    let refs: Vec<&Signal> = w0.iter().collect();
    if !c.predicate(&refs, tol) {
        return Err(Error::Constraint(
            "witness does not satisfy the constraint".into(),
        ));
    }
    let degrees: Vec<usize> = w0.iter().map(Signal::degree).collect();
    let total_degree: usize = degrees.iter().sum();
    if total_degree > cfg.max_n {
        return Err(Error::EnumerationCap {
            n: total_degree,
            max: cfg.max_n,
        });
    }

    let component_sets: Vec<CandidateSet> = w0
        .iter()
        .map(|signal| enumerate_candidates(signal, cfg))
        .collect::<Result<_>>()?;

    let sizes: Vec<usize> = degrees.iter().map(|&n| 1usize << n).collect();
    let total: usize = sizes.iter().product();

    let arity = c.arity();
    let results = parallel::map_ranges(total, MIN_PARALLEL_TUPLES, |range| {
        let mut found: Vec<ViolatingPair> = Vec::new();
        let mut checked = 0usize;
        let mut masks = vec![FlipMask::EMPTY; arity];
        for flat in range {
            // mixed-radix decomposition, component 0 least significant
            let mut rest = flat;
            for (j, &size) in sizes.iter().enumerate() {
                masks[j] = FlipMask::new((rest % size) as u32);
                rest /= size;
            }
            if is_excluded(&masks, &degrees, mode) {
                continue;
            }
            checked += 1;
            let tuple: Vec<&Signal> = component_sets
                .iter()
                .zip(&masks)
                .map(|(set, mask)| set.candidates()[mask.bits() as usize].1.signal())
                .collect();
            if c.predicate(&tuple, tol) {
                found.push(ViolatingPair {
                    masks: masks.clone(),
                    candidates: component_sets
                        .iter()
                        .zip(&masks)
                        .map(|(set, mask)| set.candidates()[mask.bits() as usize].1.clone())
                        .collect(),
                });
            }
        }
        vec![(checked, found)]
    });

    let mut total_pairs_checked = 0;
    let mut violating_pairs = Vec::new();
    for (checked, found) in results {
        total_pairs_checked += checked;
        violating_pairs.extend(found);
    }
    let conclusion = if violating_pairs.is_empty() {
        WitnessConclusion::WitnessHolds
    } else {
        WitnessConclusion::WitnessFails
    };
    Ok(WitnessReport {
        witness: w0.to_vec(),
        total_pairs_checked,
        violating_pairs,
        conclusion,
        mode,
    })
}

/// One failed trial of a genericity test.
#[derive(Debug, Clone, Serialize)]
pub struct FailedTrial {
    pub trial: usize,
    pub seed: u64,
    pub report: WitnessReport,
}

/// Aggregate of running [`check_witness`] on sampled members of the
/// constraint variety. Once a single witness holds, the failure set is a
/// proper subvariety and the expected failure fraction is zero, so every
/// failure is reported with its sample for inspection.
#[derive(Debug, Clone, Serialize)]
pub struct GenericTestReport {
    pub trials: usize,
    pub failures: usize,
    pub failure_fraction: f64,
    pub failed: Vec<FailedTrial>,
}

fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9E3779B97F4A7C15);
    x = (x ^ (x >> 30)).wrapping_mul(0xBF58476D1CE4E5B9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94D049BB133111EB);
    x ^ (x >> 31)
}

/// The derived seed for one trial; stable for any execution schedule.
pub fn trial_seed(seed: u64, trial: usize) -> u64 {
    splitmix64(seed ^ splitmix64(trial as u64))
}

/// Draws `trials` tuples from the constraint's sampler and checks each as a
/// witness, reporting the failure fraction.
pub fn generic_uniqueness_test(
    c: &ConstraintSystem,
    trials: usize,
    seed: u64,
    mode: WitnessMode,
    tol: f64,
    cfg: &Config,
) -> Result<GenericTestReport> {
    let outcomes = parallel::map_ranges(trials, 8, |range| {
        range
            .map(|trial| {
                let s = trial_seed(seed, trial);
                let tuple = c.sample(s)?;
                let refs: Vec<&Signal> = tuple.iter().collect();
                if !c.predicate(&refs, tol / 10.0) {
                    return Err(Error::Constraint(format!(
                        "sampler output (trial {trial}) violates the predicate at tol/10"
                    )));
                }
                let report = check_witness(c, &tuple, mode, tol, cfg)?;
                Ok((trial, s, report))
            })
            .collect::<Vec<_>>()
    });

    let mut failed = Vec::new();
    let mut count = 0usize;
    for outcome in outcomes {
        let (trial, s, report) = outcome?;
        count += 1;
        if !report.holds() {
            failed.push(FailedTrial {
                trial,
                seed: s,
                report,
            });
        }
    }
    debug_assert_eq!(count, trials);
    Ok(GenericTestReport {
        trials,
        failures: failed.len(),
        failure_fraction: if trials == 0 {
            0.0
        } else {
            failed.len() as f64 / trials as f64
        },
        failed,
    })
}

/// Filters the spectral-factorization candidates of `s` to those whose last
/// coefficient has modulus `a` (within `tol·a`), one representative per
/// trivial-equivalence class, in mask order. Generic spectra yield exactly
/// one class; an empty result means no candidate is consistent with `a`.
pub fn recover_with_last_modulus(
    s: &IntensitySpectrum,
    a: f64,
    tol: f64,
    cfg: &Config,
) -> Result<Vec<PhaseClassRep>> {
    if a.is_nan() || a <= 0.0 {
        return Err(Error::Constraint(format!(
            "target modulus must be positive, got {a}"
        )));
    }
    let set = candidates_from_intensity(s, cfg)?;
    let mut kept: Vec<PhaseClassRep> = Vec::new();
    for (_, cand) in set.candidates() {
        let last = cand.coeffs()[cand.signal().degree()].norm();
        if (last - a).abs() > tol * a {
            continue;
        }
        let duplicate = kept
            .iter()
            .any(|k| trivial_equivalent(k.signal(), cand.signal(), CLASS_TOL).unwrap_or(false));
        if !duplicate {
            kept.push(cand.clone());
        }
    }
    Ok(kept)
}

/// Uniform draw from the annulus 0.4 ≤ |z| ≤ 1.3; bounded away from zero so
/// sampled values are safe divisors and support endpoints.
fn annulus(rng: &mut impl Rng) -> Complex64 {
    let radius = 0.4 + 0.9 * rng.random::<f64>();
    let angle = 2.0 * std::f64::consts::PI * rng.random::<f64>();
    Complex64::from_polar(radius, angle)
}

/// A random full-support signal: interior coefficients uniform in the unit
/// square, endpoints drawn from an annulus.
pub fn random_full_support_signal(rng: &mut impl Rng, len: usize) -> Signal {
    assert!(len >= 2);
    let coeffs: Vec<Complex64> = (0..len)
        .map(|i| {
            if i == 0 || i == len - 1 {
                annulus(rng)
            } else {
                Complex64::new(
                    2.0 * rng.random::<f64>() - 1.0,
                    2.0 * rng.random::<f64>() - 1.0,
                )
            }
        })
        .collect();
    Signal::new(coeffs).expect("annulus endpoints guarantee full support")
}

/// The unconstrained system on signals of the given lengths: the predicate
/// is always true, so every nontrivial ambiguity is a violation.
pub fn unconstrained(lengths: Vec<usize>) -> ConstraintSystem {
    let sample_lengths = lengths.clone();
    ConstraintSystem::new(
        lengths,
        "none",
        Box::new(|_, _| true),
        Box::new(move |seed| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            Ok(sample_lengths
                .iter()
                .map(|&len| random_full_support_signal(&mut rng, len))
                .collect())
        }),
    )
}

/// The subvariety `|x[N]| = a` of signals of the given length.
pub fn fixed_last_modulus(len: usize, a: f64) -> ConstraintSystem {
    assert!(len >= 2 && a > 0.0);
    ConstraintSystem::new(
        vec![len],
        format!("fixed-last-modulus:a={a}"),
        Box::new(move |tuple, tol| {
            let signal = tuple[0];
            (signal.coeffs()[signal.degree()].norm() - a).abs() <= tol * a
        }),
        Box::new(move |seed| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut coeffs = random_full_support_signal(&mut rng, len).into_coeffs();
            // rescale the last entry onto the constraint exactly
            let last = coeffs[len - 1];
            coeffs[len - 1] = last * (a / last.norm());
            Signal::new(coeffs).map(|signal| vec![signal])
        }),
    )
}

/// The quadratic constraint `{y₁[n]·y₃[L+n] = y₂[n]·y₂[L+n]}`, n = 0..L, on
/// triples of lengths (L+1, 2L+1, 3L+1).
///
/// The relations are not invariant under independent per-component phases;
/// multiplying the components by (λ₁, λ₂, λ₃) scales the two sides by λ₁λ₃
/// and λ₂². The predicate therefore tests the relations modulo that
/// symmetry: it holds when some unit scalar μ satisfies
/// `y₁[n]·y₃[L+n] = μ·y₂[n]·y₂[L+n]` for all n, making it well defined on
/// phase classes.
pub fn stft_constraint(l: usize) -> ConstraintSystem {
    assert!(l >= 1);
    let lengths = vec![l + 1, 2 * l + 1, 3 * l + 1];
    ConstraintSystem::new(
        lengths,
        format!("stft:L={l}"),
        Box::new(move |tuple, tol| {
            let (y1, y2, y3) = (tuple[0].coeffs(), tuple[1].coeffs(), tuple[2].coeffs());
            let lhs: Vec<Complex64> = (0..=l).map(|n| y1[n] * y3[l + n]).collect();
            let rhs: Vec<Complex64> = (0..=l).map(|n| y2[n] * y2[l + n]).collect();
            let scale = lhs.iter().chain(&rhs).map(|z| z.norm()).fold(0.0, f64::max);
            let ip: Complex64 = lhs.iter().zip(&rhs).map(|(a, b)| a * b.conj()).sum();
            let unit = if ip.norm() > 0.0 {
                ip / ip.norm()
            } else {
                Complex64::new(1.0, 0.0)
            };
            lhs.iter()
                .zip(&rhs)
                .all(|(a, b)| (a - unit * b).norm() <= tol * scale)
        }),
        Box::new(move |seed| {
            // free parameters: y₁ entirely, y₂ entirely, and the parts of y₃
            // outside [L, 2L]; the relations then determine y₃[L..=2L]
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let y1: Vec<Complex64> = (0..=l).map(|_| annulus(&mut rng)).collect();
            let y2 = random_full_support_signal(&mut rng, 2 * l + 1);
            let mut y3 = vec![Complex64::new(0.0, 0.0); 3 * l + 1];
            for slot in y3.iter_mut().take(l) {
                *slot = Complex64::new(
                    2.0 * rng.random::<f64>() - 1.0,
                    2.0 * rng.random::<f64>() - 1.0,
                );
            }
            for slot in y3.iter_mut().skip(2 * l + 1) {
                *slot = Complex64::new(
                    2.0 * rng.random::<f64>() - 1.0,
                    2.0 * rng.random::<f64>() - 1.0,
                );
            }
            y3[0] = annulus(&mut rng);
            y3[3 * l] = annulus(&mut rng);
            for n in 0..=l {
                y3[l + n] = y2.coeffs()[n] * y2.coeffs()[l + n] / y1[n];
            }
            Ok(vec![Signal::new(y1)?, y2, Signal::new(y3)?])
        }),
    )
}

/// Parses a CLI-style constraint selector: `none`,
/// `fixed-last-modulus:a=<float>`, or `stft:L=<int>`. `lengths` supplies the
/// component lengths for the selectors that do not determine them.
pub fn parse_constraint(selector: &str, lengths: Option<Vec<usize>>) -> Result<ConstraintSystem> {
    if selector == "none" {
        let lengths = lengths.ok_or_else(|| {
            Error::Constraint("constraint 'none' needs explicit signal lengths".into())
        })?;
        if lengths.is_empty() || lengths.iter().any(|&l| l < 2) {
            return Err(Error::Constraint("lengths must all be at least 2".into()));
        }
        return Ok(unconstrained(lengths));
    }
    if let Some(rest) = selector.strip_prefix("fixed-last-modulus:a=") {
        let a: f64 = rest
            .parse()
            .map_err(|_| Error::Constraint(format!("bad modulus in selector '{selector}'")))?;
        if a.is_nan() || a <= 0.0 {
            return Err(Error::Constraint("modulus must be positive".into()));
        }
        let lengths = lengths.ok_or_else(|| {
            Error::Constraint("constraint 'fixed-last-modulus' needs a signal length".into())
        })?;
        if lengths.len() != 1 || lengths[0] < 2 {
            return Err(Error::Constraint(
                "fixed-last-modulus takes exactly one length ≥ 2".into(),
            ));
        }
        return Ok(fixed_last_modulus(lengths[0], a));
    }
    if let Some(rest) = selector.strip_prefix("stft:L=") {
        let l: usize = rest
            .parse()
            .map_err(|_| Error::Constraint(format!("bad step size in selector '{selector}'")))?;
        if l == 0 {
            return Err(Error::Constraint(
                "stft step size must be at least 1".into(),
            ));
        }
        return Ok(stft_constraint(l));
    }
    Err(Error::Constraint(format!(
        "unknown constraint selector '{selector}'"
    )))
}
