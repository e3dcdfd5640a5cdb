//! Exact enumeration, classification, and certification of the ambiguities
//! of one-dimensional Fourier phase retrieval for finite complex signals.
//!
//! A signal x ∈ C^{N+1} with full support is identified with the polynomial
//! `x̂(ω) = Σ x[n]·ωⁿ` on the unit circle; only its intensity function
//! A(ω) = |x̂(ω)|² is observed. Factoring x̂ through its roots, every signal
//! with the same intensity arises by flipping a subset of roots across the
//! unit circle (β ↦ 1/conj(β), leading coefficient rescaled by |β|), so the
//! ambiguity structure is finite and fully computable:
//!
//! - [`signal`] — signals, intensity spectra, and the trivial ambiguity
//!   group (global phase and reflection-conjugation);
//! - [`roots`] — conversion between coefficient and root form, Vieta
//!   synthesis, the flip action, and multiset root matching;
//! - [`enumeration`] — the 2^N candidate sweep, trivial-equivalence
//!   classes, spectral factorization, and minimum phase;
//! - [`incidence`] — classification of equi-intensity pairs by flip count
//!   and convolution certificates;
//! - [`constraint`] — witness checking and Monte-Carlo genericity tests
//!   for side constraints that restore uniqueness.
//!
//! All types are immutable values and every operation is pure; everything
//! can be called concurrently. The big enumeration loops are internally
//! chunked across threads (capped by `PHASE_AMBIGUITY_THREADS`, 0 or unset
//! meaning one thread per core) with deterministic, mask-ascending output.

mod assignment;
mod parallel;
mod solver;

pub mod config;
pub mod constraint;
pub mod enumeration;
pub mod error;
pub mod incidence;
pub mod roots;
pub mod signal;

pub use config::Config;
pub use constraint::{
    check_witness, fixed_last_modulus, generic_uniqueness_test, parse_constraint,
    random_full_support_signal, recover_with_last_modulus, stft_constraint, unconstrained,
    ConstraintSystem, GenericTestReport, WitnessConclusion, WitnessMode, WitnessReport,
};
pub use enumeration::{
    candidates_from_intensity, enumerate_candidates, factor_intensity, minimum_phase,
    CandidateClass, CandidateSet, RootPairing,
};
pub use error::{Error, Result};
pub use incidence::{
    classify_pair, convolution_factor, involution_partner, ConvolutionCertificate,
    PairClassification,
};
pub use roots::{
    conj_reciprocal, flip, match_roots, synthesize, to_root_form, FlipMask, RootForm, RootMatch,
};
pub use signal::{
    canonicalize_phase, convolve, evaluate_intensity, intensity, reflect_conjugate, spectra_equal,
    trivial_equivalent, IntensitySpectrum, PhaseClassRep, Signal,
};

pub use num_complex::Complex64;
