//! Numerical tolerances and limits shared by the library operations.

/// Full-support threshold, relative to the largest coefficient magnitude.
pub const DEFAULT_SUPPORT_TOL: f64 = 1e-12;
/// Acceptable residual |p(β)| at a computed root, relative to the largest
/// coefficient magnitude of p.
pub const DEFAULT_RESIDUAL_TOL: f64 = 1e-9;
/// Band |(|β|) − 1| ≤ circle_tol marking a root as circle-degenerate.
pub const DEFAULT_CIRCLE_TOL: f64 = 1e-8;
/// Relative tolerance for reciprocal-conjugate pairing.
pub const DEFAULT_PAIRING_TOL: f64 = 1e-7;
/// Relative tolerance for collapsing numerically coincident candidates.
pub const DEFAULT_DEDUP_TOL: f64 = 1e-9;
/// Relative tolerance for constraint predicates.
pub const DEFAULT_PREDICATE_TOL: f64 = 1e-8;
/// Hard cap on the total degree for exhaustive 2^N enumerations.
pub const DEFAULT_MAX_N: usize = 24;

/// Tolerances and limits used across root finding, enumeration,
/// classification, and constraint checking.
///
/// `Config::default()` gives the desk-scale defaults above; override fields
/// as needed. Every tolerance is relative unless stated otherwise.
#[derive(Debug, Clone)]
pub struct Config {
    pub support_tol: f64,
    pub residual_tol: f64,
    /// Root-iteration budget before reporting non-convergence.
    pub max_iterations: usize,
    /// Relative distance below which computed roots are treated as one
    /// multiple root and replaced by their centroid.
    pub cluster_tol: f64,
    pub circle_tol: f64,
    pub pairing_tol: f64,
    pub dedup_tol: f64,
    pub predicate_tol: f64,
    pub max_n: usize,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            support_tol: DEFAULT_SUPPORT_TOL,
            residual_tol: DEFAULT_RESIDUAL_TOL,
            max_iterations: 120,
            cluster_tol: 1e-6,
            circle_tol: DEFAULT_CIRCLE_TOL,
            pairing_tol: DEFAULT_PAIRING_TOL,
            dedup_tol: DEFAULT_DEDUP_TOL,
            predicate_tol: DEFAULT_PREDICATE_TOL,
            max_n: DEFAULT_MAX_N,
        }
    }
}
