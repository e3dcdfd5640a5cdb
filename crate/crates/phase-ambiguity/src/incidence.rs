//! Classification of equi-intensity signal pairs by flip count and
//! certification of the classification through convolution factorizations.
//!
//! Pairs (x, x′) with the same intensity function split into components
//! indexed by k = number of flipped roots: k = 0 is the diagonal (equality
//! mod global phase), k = N the reflect-conjugation graph. Component
//! membership is certified by vectors x₁, x₂ with x = x₁ ⋆ x₂ and
//! x′ ∼ x₁ ⋆ ẋ₂ mod global phase.

use num_complex::Complex64;
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::config::Config;
use crate::error::{Error, Result};
use crate::roots::{expand_from_roots, expand_monic, match_roots, to_root_form, FlipMask};
use crate::signal::{
    complexes_to_pairs, convolve, intensity, max_diff, reflect_conjugate, reflect_conjugate_vec,
    spectra_equal, Signal,
};

/// The incidence components an equi-intensity pair belongs to.
///
/// Generically a single component {k}; pairs whose signals have
/// circle-degenerate roots belong to every k the undetermined flips permit,
/// reported as a contiguous range with one witness mask per component.
#[derive(Debug, Clone)]
pub struct PairClassification {
    pub components: Vec<usize>,
    /// Witness flip mask per component, parallel to `components`; the first
    /// entry is the lexicographically smallest witness.
    pub witnesses: Vec<FlipMask>,
    /// Root slots on the unit circle (indices into the first signal's
    /// root form).
    pub degenerate_roots: Vec<usize>,
}

impl Serialize for PairClassification {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut s = serializer.serialize_struct("PairClassification", 3)?;
        s.serialize_field("components", &self.components)?;
        s.serialize_field("witness_masks", &self.witnesses)?;
        s.serialize_field("degenerate_roots", &self.degenerate_roots)?;
        s.end()
    }
}

/// A convolution certificate for a classified pair: x ≈ x1 ⋆ x2 and
/// x′ ∼ x1 ⋆ ẋ2 mod global phase. `x2` is monic of length k+1 and carries
/// the flipped roots; `x1` absorbs the leading scalar.
#[derive(Debug, Clone)]
pub struct ConvolutionCertificate {
    pub k: usize,
    pub mask: FlipMask,
    pub x1: Vec<Complex64>,
    pub x2: Vec<Complex64>,
    pub residual_x: f64,
    pub residual_xprime: f64,
}

impl Serialize for ConvolutionCertificate {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct VecWire {
            signal: Vec<[f64; 2]>,
        }
        let mut s = serializer.serialize_struct("ConvolutionCertificate", 5)?;
        s.serialize_field("k", &self.k)?;
        s.serialize_field("mask", &self.mask)?;
        s.serialize_field(
            "x1",
            &VecWire {
                signal: complexes_to_pairs(&self.x1),
            },
        )?;
        s.serialize_field(
            "x2",
            &VecWire {
                signal: complexes_to_pairs(&self.x2),
            },
        )?;
        s.serialize_field("residuals", &[self.residual_x, self.residual_xprime])?;
        s.end()
    }
}

/// Classifies the pair (x, xp) into incidence components. Errors with
/// [`Error::NotEquiIntensity`] when the spectra differ beyond `tol` and with
/// [`Error::NoMatch`] when the root multisets are numerically inconsistent.
pub fn classify_pair(
    x: &Signal,
    xp: &Signal,
    tol: f64,
    cfg: &Config,
) -> Result<PairClassification> {
    if !spectra_equal(&intensity(x), &intensity(xp), tol)? {
        return Err(Error::NotEquiIntensity);
    }
    let ra = to_root_form(x, cfg)?;
    let rb = to_root_form(xp, cfg)?;
    let m = match_roots(&ra, &rb, tol, cfg)?;

    let base = m.mask.popcount() as usize;
    let mut components = Vec::with_capacity(m.degenerate.len() + 1);
    let mut witnesses = Vec::with_capacity(m.degenerate.len() + 1);
    // each circle-degenerate root may count as flipped or not, widening the
    // component set one step per degenerate slot
    for extra in 0..=m.degenerate.len() {
        let mut witness = m.mask;
        for &slot in m.degenerate.iter().take(extra) {
            witness = witness.with(slot);
        }
        components.push(base + extra);
        witnesses.push(witness);
    }
    Ok(PairClassification {
        components,
        witnesses,
        degenerate_roots: m.degenerate,
    })
}

/// The involution (x, x′) ↦ (x, ẋ′), which maps component k to N−k.
pub fn involution_partner(x: &Signal, xp: &Signal, tol: f64) -> Result<(Signal, Signal)> {
    if !spectra_equal(&intensity(x), &intensity(xp), tol)? {
        return Err(Error::NotEquiIntensity);
    }
    Ok((x.clone(), reflect_conjugate(xp)))
}

/// Factors x through the witness mask of its classification against xp:
/// x2 is the monic polynomial of the flipped roots, x1 = a₀·Π of the rest.
/// When degenerate roots permit several components the smallest witness mask
/// is used.
pub fn convolution_factor(
    x: &Signal,
    xp: &Signal,
    tol: f64,
    cfg: &Config,
) -> Result<ConvolutionCertificate> {
    let classification = classify_pair(x, xp, tol, cfg)?;
    let mask = classification.witnesses[0];
    let rf = to_root_form(x, cfg)?;

    let mut flipped_roots = Vec::new();
    let mut kept_roots = Vec::new();
    for (i, &r) in rf.roots().iter().enumerate() {
        if mask.contains(i) {
            flipped_roots.push(r);
        } else {
            kept_roots.push(r);
        }
    }
    let x2 = expand_monic(&flipped_roots);
    let x1 = expand_from_roots(rf.leading(), &kept_roots);

    let z = convolve(&x1, &x2)?;
    let residual_x = max_diff(z.coeffs(), x.coeffs()) / x.max_abs();

    let zp = convolve(&x1, &reflect_conjugate_vec(&x2))?;
    let residual_xprime = phase_aligned_distance(zp.coeffs(), xp.coeffs()) / xp.max_abs();

    Ok(ConvolutionCertificate {
        k: mask.popcount() as usize,
        mask,
        x1,
        x2,
        residual_x,
        residual_xprime,
    })
}

/// Max-norm distance after the least-squares optimal global phase alignment
/// of `a` onto `b`; the tight mod-S¹ metric.
fn phase_aligned_distance(a: &[Complex64], b: &[Complex64]) -> f64 {
    debug_assert_eq!(a.len(), b.len());
    let ip: Complex64 = a.iter().zip(b).map(|(u, v)| v * u.conj()).sum();
    let unit = if ip.norm() > 0.0 {
        ip / ip.norm()
    } else {
        Complex64::new(1.0, 0.0)
    };
    a.iter()
        .zip(b)
        .map(|(u, v)| (u * unit - v).norm())
        .fold(0.0, f64::max)
}
