//! Dense polynomial root finding: Aberth–Ehrlich simultaneous iteration with
//! Newton polishing and multiple-root clustering.
//!
//! Coefficients are stored constant term first. The returned roots are sorted
//! by (re, im) and carry multiplicity: a cluster of nearby approximations is
//! replaced by its centroid repeated once per member, which restores the
//! accuracy lost at multiple roots (the first-order errors of a symmetric
//! cluster cancel in the mean).

use num_complex::Complex64;

use crate::config::Config;
use crate::error::{Error, Result};

/// Evaluates p and p′ at z by a joint Horner pass.
pub(crate) fn horner_with_derivative(coeffs: &[Complex64], z: Complex64) -> (Complex64, Complex64) {
    let mut p = Complex64::new(0.0, 0.0);
    let mut dp = Complex64::new(0.0, 0.0);
    for &c in coeffs.iter().rev() {
        dp = dp * z + p;
        p = p * z + c;
    }
    (p, dp)
}

pub(crate) fn horner(coeffs: &[Complex64], z: Complex64) -> Complex64 {
    let mut p = Complex64::new(0.0, 0.0);
    for &c in coeffs.iter().rev() {
        p = p * z + c;
    }
    p
}

fn sort_key(a: &Complex64, b: &Complex64) -> std::cmp::Ordering {
    a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im))
}

/// Finds all roots of the polynomial with the given coefficients
/// (constant term first, nonzero leading coefficient).
///
/// Every returned root passes the residual test
/// |p(β)| ≤ `cfg.residual_tol` · max|coeffs|; the indices of roots that fail
/// it are reported in the error otherwise.
pub(crate) fn find_roots(coeffs: &[Complex64], cfg: &Config) -> Result<Vec<Complex64>> {
    assert!(coeffs.len() >= 2, "constant polynomials have no roots");
    let degree = coeffs.len() - 1;
    let lead = coeffs[degree];
    if lead.norm() == 0.0 {
        return Err(Error::ZeroLeading);
    }

    if degree == 1 {
        return Ok(vec![-coeffs[0] / lead]);
    }

    let monic: Vec<Complex64> = coeffs.iter().map(|c| c / lead).collect();
    let mut z = initial_guesses(&monic);

    let mut frozen = vec![false; degree];
    for _ in 0..cfg.max_iterations {
        let mut moved = false;
        for i in 0..degree {
            if frozen[i] {
                continue;
            }
            let (p, dp) = horner_with_derivative(&monic, z[i]);
            if p.norm_sqr() == 0.0 {
                frozen[i] = true;
                continue;
            }
            let newton = if dp.norm_sqr() > 0.0 {
                p / dp
            } else {
                // stationary point: nudge off it
                let nudge = 1.0 + z[i].norm();
                z[i] += Complex64::new(1e-6, 1e-6) * nudge;
                moved = true;
                continue;
            };
            let mut repulsion = Complex64::new(0.0, 0.0);
            let mut collided = false;
            for j in 0..degree {
                if j != i {
                    let d = z[i] - z[j];
                    let d_sqr = d.norm_sqr();
                    if d_sqr < 1e-300 {
                        collided = true;
                        break;
                    }
                    repulsion += d.conj() * (1.0 / d_sqr);
                }
            }
            if collided {
                let nudge = 1.0 + z[i].norm();
                z[i] += Complex64::new(1e-12, 2e-12) * nudge;
                moved = true;
                continue;
            }
            let denom = Complex64::new(1.0, 0.0) - newton * repulsion;
            let step = if denom.norm_sqr() < 1e-300 {
                newton
            } else {
                newton / denom
            };
            z[i] -= step;
            // |step|² against 1e−28·(1 + |z|²): the squared freeze criterion
            if step.norm_sqr() <= 1e-28 * (1.0 + z[i].norm_sqr()) {
                frozen[i] = true;
            } else {
                moved = true;
            }
        }
        if !moved {
            break;
        }
    }

    // two Newton steps per root on the original polynomial
    for zi in z.iter_mut() {
        for _ in 0..2 {
            let (p, dp) = horner_with_derivative(coeffs, *zi);
            if dp.norm_sqr() > 0.0 {
                let step = p / dp;
                if step.norm_sqr() < 0.25 * (1.0 + zi.norm_sqr()) {
                    *zi -= step;
                }
            }
        }
    }

    z.sort_by(sort_key);
    let roots = cluster_multiple_roots(&z, cfg.cluster_tol);

    let scale = coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max);
    let failed: Vec<usize> = roots
        .iter()
        .enumerate()
        .filter(|(_, r)| horner(coeffs, **r).norm() > cfg.residual_tol * scale)
        .map(|(i, _)| i)
        .collect();
    if !failed.is_empty() {
        return Err(Error::NonConvergence { failed });
    }
    Ok(roots)
}

/// Starting points spread over the annulus between the Cauchy lower and
/// upper root bounds: radii staggered exponentially so multi-scale root
/// sets are covered, angles offset to avoid the real and imaginary axes.
fn initial_guesses(monic: &[Complex64]) -> Vec<Complex64> {
    let degree = monic.len() - 1;
    let tail_max = monic[..degree].iter().map(|c| c.norm()).fold(0.0, f64::max);
    let upper = (1.0 + tail_max).min(1e8);
    let lower = (monic[0].norm() / (1.0 + tail_max.max(1.0))).max(1e-8);
    let ratio = upper / lower;
    (0..degree)
        .map(|k| {
            let t = (k as f64 + 0.5) / degree as f64;
            let radius = lower * ratio.powf(t);
            let angle = 2.0 * std::f64::consts::PI * (k as f64) * 0.618_034 + 0.43;
            Complex64::from_polar(radius, angle)
        })
        .collect()
}

/// Groups roots closer than `cluster_tol` (relative to their magnitude) and
/// replaces each group by its centroid, repeated with multiplicity. Input
/// must be sorted; output stays sorted.
fn cluster_multiple_roots(sorted: &[Complex64], cluster_tol: f64) -> Vec<Complex64> {
    let n = sorted.len();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut Vec<usize>, i: usize) -> usize {
        if parent[i] != i {
            let root = find(parent, parent[i]);
            parent[i] = root;
        }
        parent[i]
    }
    for (i, zi) in sorted.iter().enumerate() {
        for (j, zj) in sorted.iter().enumerate().skip(i + 1) {
            let threshold = cluster_tol * zi.norm().max(zj.norm()).max(1e-30);
            if (zi - zj).norm() <= threshold {
                let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                if a != b {
                    parent[a] = b;
                }
            }
        }
    }
    let mut sums = vec![(Complex64::new(0.0, 0.0), 0usize); n];
    for (i, zi) in sorted.iter().enumerate() {
        let r = find(&mut parent, i);
        sums[r].0 += zi;
        sums[r].1 += 1;
    }
    let mut out = Vec::with_capacity(n);
    for (sum, count) in sums {
        if count > 0 {
            let centroid = sum / count as f64;
            out.extend(std::iter::repeat_n(centroid, count));
        }
    }
    out.sort_by(sort_key);
    out
}
