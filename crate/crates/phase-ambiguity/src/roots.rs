//! The root cover: conversion between coefficient space and
//! (leading coefficient, root multiset) form, the Vieta synthesis map, and
//! the conjugate-reciprocal flip action.
//!
//! A signal factors as x̂(ω) = a₀(ω − β₁)···(ω − β_N) with all βᵢ nonzero.
//! Flipping a subset S of roots, βᵢ ↦ 1/conj(βᵢ) with a₀ rescaled by |βᵢ|
//! for each i ∈ S, preserves the intensity function; every signal with the
//! same intensity arises this way.

use num_complex::Complex64;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::assignment::min_cost_assignment;
use crate::config::Config;
use crate::error::{Error, Result};
use crate::signal::{complexes_to_pairs, pairs_to_complexes, Signal};
use crate::solver;

/// A point of the root cover: leading scalar a₀ and N nonzero roots.
/// Root order is bookkeeping only; the object semantically carries a multiset.
#[derive(Debug, Clone, PartialEq)]
pub struct RootForm {
    leading: Complex64,
    roots: Vec<Complex64>,
}

impl RootForm {
    pub fn new(leading: Complex64, roots: Vec<Complex64>) -> Result<Self> {
        if !leading.re.is_finite() || !leading.im.is_finite() || leading.norm() == 0.0 {
            return Err(Error::InvalidRootForm(
                "leading coefficient must be finite and nonzero".into(),
            ));
        }
        if roots.is_empty() {
            return Err(Error::InvalidRootForm(
                "at least one root is required".into(),
            ));
        }
        for (i, r) in roots.iter().enumerate() {
            if !r.re.is_finite() || !r.im.is_finite() {
                return Err(Error::NonFinite { index: i });
            }
            if r.norm() <= crate::config::DEFAULT_SUPPORT_TOL {
                return Err(Error::InvalidRootForm(format!(
                    "root {i} has modulus {:.3e}; zero roots contradict full support",
                    r.norm()
                )));
            }
        }
        Ok(RootForm { leading, roots })
    }

    pub fn leading(&self) -> Complex64 {
        self.leading
    }

    pub fn roots(&self) -> &[Complex64] {
        &self.roots
    }

    /// Number of roots N.
    pub fn degree(&self) -> usize {
        self.roots.len()
    }
}

/// A subset S ⊆ {1..N} of root slots, encoded as a bit mask
/// (bit i−1 set ⇔ slot i ∈ S).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FlipMask {
    bits: u32,
}

impl FlipMask {
    pub const EMPTY: FlipMask = FlipMask { bits: 0 };

    pub fn new(bits: u32) -> Self {
        FlipMask { bits }
    }

    /// The full subset {1..N}.
    pub fn full(n: usize) -> Self {
        assert!(n <= 32);
        FlipMask {
            bits: if n == 32 { u32::MAX } else { (1u32 << n) - 1 },
        }
    }

    pub fn bits(&self) -> u32 {
        self.bits
    }

    pub fn popcount(&self) -> u32 {
        self.bits.count_ones()
    }

    pub fn contains(&self, slot: usize) -> bool {
        slot < 32 && self.bits & (1 << slot) != 0
    }

    pub fn with(self, slot: usize) -> FlipMask {
        assert!(slot < 32);
        FlipMask {
            bits: self.bits | (1 << slot),
        }
    }

    pub fn is_valid_for(&self, n: usize) -> bool {
        n >= 32 || self.bits < (1u32 << n)
    }
}

impl Serialize for FlipMask {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_u32(self.bits)
    }
}

impl<'de> Deserialize<'de> for FlipMask {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        Ok(FlipMask::new(u32::deserialize(deserializer)?))
    }
}

/// The conjugate-reciprocal partner 1/conj(β).
pub fn conj_reciprocal(beta: Complex64) -> Complex64 {
    beta.conj().inv()
}

/// Factors x̂(ω) = a₀(ω − β₁)···(ω − β_N). The leading scalar is `x[N]` and
/// every returned root satisfies |x̂(β)| ≤ residual_tol · max|x|.
pub fn to_root_form(x: &Signal, cfg: &Config) -> Result<RootForm> {
    let roots = solver::find_roots(x.coeffs(), cfg)?;
    RootForm::new(x.coeffs()[x.degree()], roots)
}

/// Expands Π(ω − βᵢ) times the leading scalar; constant term first.
pub(crate) fn expand_from_roots(leading: Complex64, roots: &[Complex64]) -> Vec<Complex64> {
    let mut coeffs = Vec::with_capacity(roots.len() + 1);
    coeffs.push(leading);
    for &r in roots {
        coeffs.push(Complex64::new(0.0, 0.0));
        for j in (1..coeffs.len()).rev() {
            let prev = coeffs[j - 1];
            coeffs[j] = prev - r * coeffs[j];
        }
        let first = coeffs[0];
        coeffs[0] = -r * first;
    }
    coeffs
}

/// Monic expansion Π(ω − βᵢ); `[1]` for the empty set.
pub(crate) fn expand_monic(roots: &[Complex64]) -> Vec<Complex64> {
    expand_from_roots(Complex64::new(1.0, 0.0), roots)
}

/// The Vieta synthesis `x[n] = a₀·e_{N−n}(−β₁, …, −β_N)`, i.e. the
/// coefficient
/// vector of a₀·Π(ω − βᵢ). Permutation-invariant in the roots up to rounding.
pub fn synthesize(r: &RootForm) -> Result<Signal> {
    Signal::new(expand_from_roots(r.leading, &r.roots))
}

/// Applies the flip sᵢ for every i ∈ S: βᵢ ↦ 1/conj(βᵢ) and a₀ ↦ a₀·|βᵢ|.
/// An involution per mask; preserves the intensity of the synthesized signal.
///
/// Panics if the mask addresses slots beyond the root count.
pub fn flip(r: &RootForm, mask: FlipMask) -> RootForm {
    assert!(
        mask.is_valid_for(r.degree()),
        "mask {:#b} addresses more than {} roots",
        mask.bits(),
        r.degree()
    );
    let mut leading = r.leading;
    let roots = r
        .roots
        .iter()
        .enumerate()
        .map(|(i, &beta)| {
            if mask.contains(i) {
                leading *= beta.norm();
                conj_reciprocal(beta)
            } else {
                beta
            }
        })
        .collect();
    RootForm { leading, roots }
}

/// Outcome of aligning two root forms: the flip subset (bits index `a`'s
/// slots), the slots whose roots sit on the unit circle (their membership is
/// undetermined and is resolved to "not flipped"), and the pairing
/// `b_index = pairing[a_slot]`.
#[derive(Debug, Clone)]
pub struct RootMatch {
    pub mask: FlipMask,
    pub degenerate: Vec<usize>,
    pub pairing: Vec<usize>,
}

fn relative_distance(u: Complex64, v: Complex64) -> f64 {
    (u - v).norm() / u.norm().max(v.norm()).max(1e-300)
}

/// Aligns `b`'s root multiset with `a`'s so that, per slot i, `b`'s root is
/// βᵢ (i ∉ S) or 1/conj(βᵢ) (i ∈ S) within `tol`. The alignment is solved as
/// a min-cost assignment over both flip choices per slot.
pub fn match_roots(a: &RootForm, b: &RootForm, tol: f64, cfg: &Config) -> Result<RootMatch> {
    let n = a.degree();
    if n != b.degree() {
        return Err(Error::LengthMismatch {
            left: n,
            right: b.degree(),
        });
    }

    let flipped: Vec<Complex64> = a.roots.iter().map(|&r| conj_reciprocal(r)).collect();
    let cost: Vec<Vec<f64>> = (0..n)
        .map(|slot| {
            (0..n)
                .map(|j| {
                    relative_distance(b.roots[j], a.roots[slot])
                        .min(relative_distance(b.roots[j], flipped[slot]))
                })
                .collect()
        })
        .collect();
    let pairing = min_cost_assignment(&cost);

    let mut mask = FlipMask::EMPTY;
    let mut degenerate = Vec::new();
    for slot in 0..n {
        let j = pairing[slot];
        let d_keep = relative_distance(b.roots[j], a.roots[slot]);
        let d_flip = relative_distance(b.roots[j], flipped[slot]);
        if d_keep.min(d_flip) > tol {
            return Err(Error::NoMatch(format!(
                "slot {slot}: nearest candidate is {:.3e} away (tolerance {tol:.3e})",
                d_keep.min(d_flip)
            )));
        }
        if (a.roots[slot].norm() - 1.0).abs() <= cfg.circle_tol {
            degenerate.push(slot);
        } else if d_flip < d_keep {
            mask = mask.with(slot);
        }
    }

    // the leading scalars must satisfy |b₀| = |a₀|·Π_{i∈S}|βᵢ|, otherwise the
    // two forms do not share an intensity function
    let mut expected = a.leading.norm();
    for slot in 0..n {
        if mask.contains(slot) {
            expected *= a.roots[slot].norm();
        }
    }
    let got = b.leading.norm();
    if (got - expected).abs() > tol * got.max(expected) {
        return Err(Error::NoMatch(format!(
            "leading coefficient inconsistent: |b.leading| = {got:.6e}, flips require {expected:.6e}"
        )));
    }

    Ok(RootMatch {
        mask,
        degenerate,
        pairing,
    })
}

// ---------------------------------------------------------------------------
// Wire format: {"leading": [re, im], "roots": [[re, im], ...]}
// ---------------------------------------------------------------------------

#[derive(Serialize, Deserialize)]
struct RootFormWire {
    leading: [f64; 2],
    roots: Vec<[f64; 2]>,
}

impl Serialize for RootForm {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        RootFormWire {
            leading: [self.leading.re, self.leading.im],
            roots: complexes_to_pairs(&self.roots),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for RootForm {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let wire = RootFormWire::deserialize(deserializer)?;
        RootForm::new(
            Complex64::new(wire.leading[0], wire.leading[1]),
            pairs_to_complexes(wire.roots),
        )
        .map_err(D::Error::custom)
    }
}
