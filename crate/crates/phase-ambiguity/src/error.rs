//! Error type shared by every operation in the crate.

use thiserror::Error;

#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("signal too short: length {len}, need at least 2")]
    TooShort { len: usize },

    #[error(
        "full support violated: |coeff[{index}]| = {magnitude:.3e} is below the support tolerance"
    )]
    FullSupport { index: usize, magnitude: f64 },

    #[error("non-finite coefficient at index {index}")]
    NonFinite { index: usize },

    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },

    #[error("degree mismatch: {left} vs {right}")]
    DegreeMismatch { left: usize, right: usize },

    #[error("empty input vector")]
    EmptyInput,

    #[error("invalid intensity spectrum: {0}")]
    InvalidSpectrum(String),

    #[error("intensity evaluation has imaginary part {imag:.3e} above tolerance {tol:.3e}; spectrum is corrupted")]
    SpectrumInconsistent { imag: f64, tol: f64 },

    #[error("invalid root form: {0}")]
    InvalidRootForm(String),

    #[error("zero leading coefficient")]
    ZeroLeading,

    #[error("root finder did not converge; roots failing the residual test: {failed:?}")]
    NonConvergence { failed: Vec<usize> },

    #[error("root multisets are not related by conjugate-reciprocal flips: {0}")]
    NoMatch(String),

    #[error("reciprocal-conjugate pairing failed: {0}")]
    PairingFailure(String),

    #[error("signals do not share an intensity function")]
    NotEquiIntensity,

    #[error("enumeration cap exceeded: total degree {n} is above the limit {max}")]
    EnumerationCap { n: usize, max: usize },

    #[error("constraint error: {0}")]
    Constraint(String),
}

pub type Result<T> = std::result::Result<T, Error>;
