//! Signals, their Fourier intensity, the trivial-ambiguity group actions,
//! and equivalence testing.
//!
//! A signal is a vector x ∈ C^{N+1} with full support (`x[0] ≠ 0` and
//! `x[N] ≠ 0`), identified with the polynomial `x̂(ω) = Σ x[n] ωⁿ` on the
//! unit circle. Coefficient index 0 is the constant term. The intensity
//! function A(ω) = |x̂(ω)|² is stored through its autocorrelation
//! coefficients `c[−N..N]`, so `A(ω) = Σ c[k] ωᵏ` with `c[−k] = conj(c[k])`.

use num_complex::Complex64;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::config::DEFAULT_SUPPORT_TOL;
use crate::error::{Error, Result};

/// Factor applied to `c[0]` to obtain the tolerance for discarding the
/// imaginary part of an intensity evaluation.
pub const EVAL_TOL_FACTOR: f64 = 1e-9;

/// Relative tolerance for Hermitian symmetry of deserialized spectra.
const HERMITIAN_TOL: f64 = 1e-9;

/// A finite complex signal with full support, length N+1 ≥ 2.
#[derive(Debug, Clone, PartialEq)]
pub struct Signal {
    coeffs: Vec<Complex64>,
}

impl Signal {
    /// Builds a signal, enforcing length ≥ 2, finite entries, and full
    /// support relative to [`DEFAULT_SUPPORT_TOL`].
    pub fn new(coeffs: Vec<Complex64>) -> Result<Self> {
        Self::with_support_tol(coeffs, DEFAULT_SUPPORT_TOL)
    }

    /// Same as [`Signal::new`] with an explicit support tolerance, relative
    /// to the largest coefficient magnitude.
    pub fn with_support_tol(coeffs: Vec<Complex64>, support_tol: f64) -> Result<Self> {
        if coeffs.len() < 2 {
            return Err(Error::TooShort { len: coeffs.len() });
        }
        for (i, c) in coeffs.iter().enumerate() {
            if !c.re.is_finite() || !c.im.is_finite() {
                return Err(Error::NonFinite { index: i });
            }
        }
        let scale = max_abs(&coeffs);
        let n = coeffs.len() - 1;
        for index in [0, n] {
            let magnitude = coeffs[index].norm();
            if magnitude <= support_tol * scale {
                return Err(Error::FullSupport { index, magnitude });
            }
        }
        Ok(Signal { coeffs })
    }

    /// Constructor for coefficients already known to satisfy the invariants.
    pub(crate) fn from_validated(coeffs: Vec<Complex64>) -> Self {
        Signal { coeffs }
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    /// The polynomial degree N (length − 1).
    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn into_coeffs(self) -> Vec<Complex64> {
        self.coeffs
    }

    /// Largest coefficient magnitude.
    pub fn max_abs(&self) -> f64 {
        max_abs(&self.coeffs)
    }

    /// Multiplies every coefficient by a scalar. The scalar must be nonzero
    /// so the support invariant is preserved.
    pub fn scaled(&self, factor: Complex64) -> Signal {
        debug_assert!(factor.norm() > 0.0);
        Signal::from_validated(self.coeffs.iter().map(|c| c * factor).collect())
    }
}

/// Hermitian-symmetric autocorrelation coefficients `c[−N..N]` of the
/// degree-2N trigonometric polynomial A(ω) = |x̂(ω)|².
#[derive(Debug, Clone, PartialEq)]
pub struct IntensitySpectrum {
    /// `c[−N..N]` stored low index first, so `coeffs[k + N] = c[k]`.
    coeffs: Vec<Complex64>,
}

impl IntensitySpectrum {
    /// Validates Hermitian symmetry, positivity of `c[0]`, and finiteness.
    pub fn new(coeffs: Vec<Complex64>) -> Result<Self> {
        if coeffs.len() < 3 || coeffs.len().is_multiple_of(2) {
            return Err(Error::InvalidSpectrum(format!(
                "need an odd number ≥ 3 of coefficients, got {}",
                coeffs.len()
            )));
        }
        for (i, c) in coeffs.iter().enumerate() {
            if !c.re.is_finite() || !c.im.is_finite() {
                return Err(Error::NonFinite { index: i });
            }
        }
        let n = coeffs.len() / 2;
        let scale = max_abs(&coeffs);
        for k in 0..=n {
            let diff = (coeffs[n - k] - coeffs[n + k].conj()).norm();
            if diff > HERMITIAN_TOL * scale {
                return Err(Error::InvalidSpectrum(format!(
                    "Hermitian symmetry violated at k = {k}: |c[-k] - conj(c[k])| = {diff:.3e}"
                )));
            }
        }
        let c0 = coeffs[n];
        if c0.re <= 0.0 || c0.im.abs() > HERMITIAN_TOL * c0.re {
            return Err(Error::InvalidSpectrum(format!(
                "c[0] = {c0} must be real and strictly positive"
            )));
        }
        Ok(IntensitySpectrum { coeffs })
    }

    pub(crate) fn from_autocorrelation(coeffs: Vec<Complex64>) -> Self {
        IntensitySpectrum { coeffs }
    }

    /// The degree N; the spectrum stores 2N+1 coefficients.
    pub fn degree(&self) -> usize {
        self.coeffs.len() / 2
    }

    /// Coefficients `c[−N..N]`, low index first.
    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    /// The coefficient `c[k]` for |k| ≤ N.
    pub fn coeff(&self, k: isize) -> Complex64 {
        let n = self.degree() as isize;
        assert!(k.abs() <= n, "coefficient index {k} out of range ±{n}");
        self.coeffs[(k + n) as usize]
    }

    /// `c[0]`, the squared norm of the generating signal.
    pub fn c0(&self) -> f64 {
        self.coeffs[self.degree()].re
    }

    pub fn max_abs(&self) -> f64 {
        max_abs(&self.coeffs)
    }
}

/// The representative of a signal's S¹ orbit whose first coordinate is real
/// and strictly positive.
#[derive(Debug, Clone, PartialEq)]
pub struct PhaseClassRep {
    signal: Signal,
}

impl PhaseClassRep {
    pub fn signal(&self) -> &Signal {
        &self.signal
    }

    pub fn into_signal(self) -> Signal {
        self.signal
    }

    pub fn coeffs(&self) -> &[Complex64] {
        self.signal.coeffs()
    }
}

pub(crate) fn max_abs(coeffs: &[Complex64]) -> f64 {
    coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max)
}

/// Largest coefficient-wise distance between two equal-length vectors.
pub(crate) fn max_diff(a: &[Complex64], b: &[Complex64]) -> f64 {
    debug_assert_eq!(a.len(), b.len());
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

/// The autocorrelation `c[k] = Σ_n x[n+k]·conj(x[n])` for k = −N..N.
///
/// `c[−k]` is stored as the exact conjugate of `c[k]` and `c[0]` is computed
/// as a real sum, so Hermitian symmetry holds to the bit.
pub fn intensity(x: &Signal) -> IntensitySpectrum {
    let v = x.coeffs();
    let n = x.degree();
    let mut coeffs = vec![Complex64::new(0.0, 0.0); 2 * n + 1];
    coeffs[n] = Complex64::new(v.iter().map(|c| c.norm_sqr()).sum(), 0.0);
    for k in 1..=n {
        let mut c = Complex64::new(0.0, 0.0);
        for m in 0..=(n - k) {
            c += v[m + k] * v[m].conj();
        }
        coeffs[n + k] = c;
        coeffs[n - k] = c.conj();
    }
    IntensitySpectrum::from_autocorrelation(coeffs)
}

/// Evaluates A at the angle θ, i.e. `Σ_k c[k]·e^{−ikθ}`.
///
/// The result is real up to rounding; an imaginary part above
/// `EVAL_TOL_FACTOR`·`c[0]` signals a corrupted spectrum and is an error.
pub fn evaluate_intensity(s: &IntensitySpectrum, theta: f64) -> Result<f64> {
    let n = s.degree() as isize;
    let mut z = Complex64::new(0.0, 0.0);
    for k in -n..=n {
        z += s.coeff(k) * Complex64::from_polar(1.0, -(k as f64) * theta);
    }
    let tol = EVAL_TOL_FACTOR * s.c0();
    if z.im.abs() > tol {
        return Err(Error::SpectrumInconsistent { imag: z.im, tol });
    }
    Ok(z.re)
}

/// The reflected-conjugated signal ẋ with `ẋ[n] = conj(x[N−n])`.
///
/// On the unit circle x̂̇(ω) = ωᴺ·conj(x̂(ω)), so the intensity function is
/// unchanged; applying the operation twice returns the original signal.
pub fn reflect_conjugate(x: &Signal) -> Signal {
    let mut coeffs: Vec<Complex64> = x.coeffs().iter().rev().map(|c| c.conj()).collect();
    // lengths and endpoint magnitudes are preserved, no revalidation needed
    Signal::from_validated(std::mem::take(&mut coeffs))
}

/// Reflection-conjugation of a plain coefficient vector.
pub(crate) fn reflect_conjugate_vec(v: &[Complex64]) -> Vec<Complex64> {
    v.iter().rev().map(|c| c.conj()).collect()
}

/// Rotates the signal by the unit scalar `conj(x[0])/|x[0]|`, producing the
/// unique member of its S¹ orbit whose first coordinate is positive real.
pub fn canonicalize_phase(x: &Signal) -> PhaseClassRep {
    let x0 = x.coeffs()[0];
    let r = x0.norm();
    let unit = x0.conj() / r;
    let mut coeffs: Vec<Complex64> = x.coeffs().iter().map(|c| c * unit).collect();
    coeffs[0] = Complex64::new(r, 0.0);
    PhaseClassRep {
        signal: Signal::from_validated(coeffs),
    }
}

/// True when `b` equals `a` or the reflect-conjugate of `a` modulo global
/// phase, within the relative tolerance `tol` (max-norm, relative to the
/// max-norm of `a`).
pub fn trivial_equivalent(a: &Signal, b: &Signal, tol: f64) -> Result<bool> {
    if a.len() != b.len() {
        return Err(Error::LengthMismatch {
            left: a.len(),
            right: b.len(),
        });
    }
    let cb = canonicalize_phase(b);
    let ca = canonicalize_phase(a);
    let scale = a.max_abs();
    if max_diff(ca.coeffs(), cb.coeffs()) <= tol * scale {
        return Ok(true);
    }
    let ra = canonicalize_phase(&reflect_conjugate(a));
    Ok(max_diff(ra.coeffs(), cb.coeffs()) <= tol * scale)
}

/// Plain convolution `z[n] = Σ_ℓ a[ℓ]·b[n−ℓ]`, so ẑ(ω) = â(ω)·b̂(ω).
pub fn convolve(a: &[Complex64], b: &[Complex64]) -> Result<Signal> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::EmptyInput);
    }
    Signal::new(convolve_vec(a, b))
}

pub(crate) fn convolve_vec(a: &[Complex64], b: &[Complex64]) -> Vec<Complex64> {
    let mut z = vec![Complex64::new(0.0, 0.0); a.len() + b.len() - 1];
    for (i, ai) in a.iter().enumerate() {
        for (j, bj) in b.iter().enumerate() {
            z[i + j] += ai * bj;
        }
    }
    z
}

/// Coefficient-wise comparison of two spectra of equal degree:
/// `max_k |c1[k] − c2[k]| ≤ tol · max_k |c1[k]|`.
pub fn spectra_equal(s1: &IntensitySpectrum, s2: &IntensitySpectrum, tol: f64) -> Result<bool> {
    if s1.degree() != s2.degree() {
        return Err(Error::DegreeMismatch {
            left: s1.degree(),
            right: s2.degree(),
        });
    }
    Ok(max_diff(s1.coeffs(), s2.coeffs()) <= tol * s1.max_abs())
}

// ---------------------------------------------------------------------------
// Wire formats. Complex numbers serialize as two-element [re, im] arrays.
// ---------------------------------------------------------------------------

pub(crate) fn complexes_to_pairs(v: &[Complex64]) -> Vec<[f64; 2]> {
    v.iter().map(|c| [c.re, c.im]).collect()
}

pub(crate) fn pairs_to_complexes(v: Vec<[f64; 2]>) -> Vec<Complex64> {
    v.into_iter()
        .map(|[re, im]| Complex64::new(re, im))
        .collect()
}

#[derive(Serialize, Deserialize)]
struct SignalWire {
    signal: Vec<[f64; 2]>,
}

impl Serialize for Signal {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        SignalWire {
            signal: complexes_to_pairs(&self.coeffs),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Signal {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let wire = SignalWire::deserialize(deserializer)?;
        Signal::new(pairs_to_complexes(wire.signal)).map_err(D::Error::custom)
    }
}

impl Serialize for PhaseClassRep {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.signal.serialize(serializer)
    }
}

#[derive(Serialize, Deserialize)]
struct SpectrumWire {
    degree: usize,
    coeffs: Vec<[f64; 2]>,
}

impl Serialize for IntensitySpectrum {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        SpectrumWire {
            degree: self.degree(),
            coeffs: complexes_to_pairs(&self.coeffs),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for IntensitySpectrum {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let wire = SpectrumWire::deserialize(deserializer)?;
        if wire.coeffs.len() != 2 * wire.degree + 1 {
            return Err(D::Error::custom(format!(
                "degree {} requires {} coefficients, got {}",
                wire.degree,
                2 * wire.degree + 1,
                wire.coeffs.len()
            )));
        }
        IntensitySpectrum::new(pairs_to_complexes(wire.coeffs)).map_err(D::Error::custom)
    }
}
