//! Exhaustive enumeration of the signals sharing an intensity function,
//! reduction modulo trivial ambiguities, and spectral factorization
//! (including the minimum-phase solution).

use num_complex::Complex64;
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::assignment::min_cost_assignment;
use crate::config::Config;
use crate::error::{Error, Result};
use crate::parallel;
use crate::roots::{expand_monic, flip, synthesize, to_root_form, FlipMask, RootForm};
use crate::signal::{
    canonicalize_phase, intensity, max_diff, reflect_conjugate, IntensitySpectrum, PhaseClassRep,
    Signal,
};
use crate::solver;

/// Relative tolerance used to group candidates into trivial-equivalence
/// classes. Distinct classes of generic signals are O(1) apart while
/// candidates carry only root-finding noise, so the value is uncritical.
pub(crate) const CLASS_TOL: f64 = 1e-8;

/// Reconstructed spectra must match their source this closely.
const RECONSTRUCTION_TOL: f64 = 1e-8;

/// Spawn threads only when a mask sweep is at least this large.
const MIN_PARALLEL_MASKS: usize = 1 << 12;

/// One trivial-equivalence class of candidates: the masks whose candidates
/// fall in the class and the canonical representative (the member with the
/// fewest flips, ties broken by the smaller mask).
#[derive(Debug, Clone)]
pub struct CandidateClass {
    pub mask_members: Vec<FlipMask>,
    pub rep: PhaseClassRep,
}

/// All 2^N flip candidates of one intensity function, in mask order,
/// partitioned into trivial-equivalence classes.
#[derive(Debug, Clone)]
pub struct CandidateSet {
    source: IntensitySpectrum,
    candidates: Vec<(FlipMask, PhaseClassRep)>,
    classes: Vec<CandidateClass>,
}

impl CandidateSet {
    pub fn source(&self) -> &IntensitySpectrum {
        &self.source
    }

    /// Candidates in ascending mask order; the list always has 2^N entries,
    /// coincident candidates included.
    pub fn candidates(&self) -> &[(FlipMask, PhaseClassRep)] {
        &self.candidates
    }

    pub fn classes(&self) -> &[CandidateClass] {
        &self.classes
    }

    pub fn class_count(&self) -> usize {
        self.classes.len()
    }

    /// Index of the class containing the given mask's candidate.
    pub fn class_of_mask(&self, mask: FlipMask) -> Option<usize> {
        self.classes
            .iter()
            .position(|class| class.mask_members.contains(&mask))
    }

    /// Number of numerically distinct candidates at the given relative
    /// tolerance. Signals with repeated roots legitimately produce fewer
    /// than 2^N distinct candidates.
    pub fn distinct_count(&self, tol: f64) -> usize {
        let mut reps: Vec<&PhaseClassRep> = Vec::new();
        for (_, cand) in &self.candidates {
            let scale = cand.signal().max_abs();
            if !reps
                .iter()
                .any(|r| max_diff(r.coeffs(), cand.coeffs()) < tol * scale)
            {
                reps.push(cand);
            }
        }
        reps.len()
    }
}

impl Serialize for CandidateSet {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct ClassWire<'a> {
            mask_members: &'a [FlipMask],
            rep: &'a PhaseClassRep,
        }
        let classes: Vec<ClassWire> = self
            .classes
            .iter()
            .map(|c| ClassWire {
                mask_members: &c.mask_members,
                rep: &c.rep,
            })
            .collect();
        let mut s = serializer.serialize_struct("CandidateSet", 2)?;
        s.serialize_field("source", &self.source)?;
        s.serialize_field("classes", &classes)?;
        s.end()
    }
}

/// Synthesizes the candidate for every mask and partitions the results into
/// trivial-equivalence classes. Shared by the signal and spectrum routes.
fn candidates_from_root_form(
    source: IntensitySpectrum,
    rf: &RootForm,
    cfg: &Config,
) -> Result<CandidateSet> {
    let n = rf.degree();
    if n > cfg.max_n {
        return Err(Error::EnumerationCap { n, max: cfg.max_n });
    }
    let total = 1usize << n;

    let computed = parallel::map_ranges(total, MIN_PARALLEL_MASKS, |range| {
        range
            .map(|bits| {
                let mask = FlipMask::new(bits as u32);
                synthesize(&flip(rf, mask)).map(|sig| (mask, canonicalize_phase(&sig)))
            })
            .collect::<Vec<_>>()
    });
    let candidates: Vec<(FlipMask, PhaseClassRep)> = computed.into_iter().collect::<Result<_>>()?;

    // classes keyed by trivial equivalence against each class anchor; the
    // anchor's reflect-conjugate is cached and comparisons bail at the first
    // coefficient that exceeds the tolerance
    fn all_within(a: &[Complex64], b: &[Complex64], tol: f64) -> bool {
        let tol_sqr = tol * tol;
        a.iter().zip(b).all(|(u, v)| (u - v).norm_sqr() <= tol_sqr)
    }
    struct OpenClass {
        members: Vec<FlipMask>,
        anchor_index: usize,
        reflected: PhaseClassRep,
        tol: f64,
    }
    let mut open: Vec<OpenClass> = Vec::new();
    for (index, (mask, cand)) in candidates.iter().enumerate() {
        let position = open.iter().position(|class| {
            let anchor = &candidates[class.anchor_index].1;
            all_within(anchor.coeffs(), cand.coeffs(), class.tol)
                || all_within(class.reflected.coeffs(), cand.coeffs(), class.tol)
        });
        match position {
            Some(i) => open[i].members.push(*mask),
            None => open.push(OpenClass {
                members: vec![*mask],
                anchor_index: index,
                reflected: canonicalize_phase(&reflect_conjugate(cand.signal())),
                tol: CLASS_TOL * cand.signal().max_abs(),
            }),
        }
    }
    let classes: Vec<CandidateClass> = open
        .into_iter()
        .map(|class| {
            let rep_mask = class
                .members
                .iter()
                .min_by_key(|m| (m.popcount(), m.bits()))
                .copied()
                .expect("classes are never empty");
            CandidateClass {
                mask_members: class.members,
                rep: candidates[rep_mask.bits() as usize].1.clone(),
            }
        })
        .collect();

    Ok(CandidateSet {
        source,
        candidates,
        classes,
    })
}

/// Enumerates all 2^N root-flip candidates of `x` and groups them into
/// trivial-equivalence classes. The class of the empty mask contains `x`
/// itself; generically there are 2^{N−1} classes.
pub fn enumerate_candidates(x: &Signal, cfg: &Config) -> Result<CandidateSet> {
    let rf = to_root_form(x, cfg)?;
    candidates_from_root_form(intensity(x), &rf, cfg)
}

/// The conjugate-reciprocal root pairing of an intensity function: N pairs
/// (inside, outside) with outside = 1/conj(inside), the positive scale |b|
/// of the all-inside factorization, and the indices of pairs degenerately
/// sitting on the unit circle.
#[derive(Debug, Clone)]
pub struct RootPairing {
    pairs: Vec<(Complex64, Complex64)>,
    scale: f64,
    degenerate: Vec<usize>,
}

impl RootPairing {
    pub fn pairs(&self) -> &[(Complex64, Complex64)] {
        &self.pairs
    }

    pub fn scale(&self) -> f64 {
        self.scale
    }

    pub fn degenerate(&self) -> &[usize] {
        &self.degenerate
    }

    pub fn inside_roots(&self) -> Vec<Complex64> {
        self.pairs.iter().map(|&(i, _)| i).collect()
    }

    /// The root form of the minimum-phase candidate.
    pub fn minimum_phase_root_form(&self) -> Result<RootForm> {
        RootForm::new(Complex64::new(self.scale, 0.0), self.inside_roots())
    }
}

impl Serialize for RootPairing {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let pairs: Vec<[[f64; 2]; 2]> = self
            .pairs
            .iter()
            .map(|(i, o)| [[i.re, i.im], [o.re, o.im]])
            .collect();
        let mut s = serializer.serialize_struct("RootPairing", 3)?;
        s.serialize_field("pairs", &pairs)?;
        s.serialize_field("scale", &self.scale)?;
        s.serialize_field("degenerate", &self.degenerate)?;
        s.end()
    }
}

fn relative_distance(u: Complex64, v: Complex64) -> f64 {
    (u - v).norm() / u.norm().max(v.norm()).max(1e-300)
}

/// Factors A(ω) through the roots of ω^N·A(ω): the 2N roots are matched into
/// reciprocal-conjugate pairs by min-cost assignment and the scale is fixed
/// so the reconstruction reproduces `c[0]`.
///
/// Fails with [`Error::PairingFailure`] when no pairing meets the tolerance,
/// which is how spectra that are not valid intensities (negative somewhere
/// on the circle) are detected.
pub fn factor_intensity(s: &IntensitySpectrum, cfg: &Config) -> Result<RootPairing> {
    let n = s.degree();
    if n > cfg.max_n {
        return Err(Error::EnumerationCap { n, max: cfg.max_n });
    }
    let coeffs = s.coeffs();
    if coeffs[2 * n].norm() <= cfg.support_tol * s.max_abs() {
        return Err(Error::ZeroLeading);
    }

    // ω^N·A(ω) has the stored coefficient list as its plain coefficients
    let roots = solver::find_roots(coeffs, cfg)?;

    let mut inside = Vec::new();
    let mut outside = Vec::new();
    let mut band = Vec::new();
    for r in roots {
        let m = r.norm();
        if (m - 1.0).abs() <= cfg.circle_tol {
            band.push(r);
        } else if m < 1.0 {
            inside.push(r);
        } else {
            outside.push(r);
        }
    }

    // unit-circle roots of a valid intensity have even multiplicity; pair
    // them among themselves by angle
    if band.len() % 2 != 0 {
        return Err(Error::PairingFailure(format!(
            "{} unit-circle roots cannot be split into double roots; the spectrum is negative somewhere",
            band.len()
        )));
    }
    band.sort_by(|a, b| a.arg().total_cmp(&b.arg()).then(a.re.total_cmp(&b.re)));
    let mut band_pairs = Vec::new();
    for chunk in band.chunks(2) {
        if relative_distance(chunk[0], chunk[1]) > cfg.pairing_tol {
            return Err(Error::PairingFailure(format!(
                "unit-circle roots {} and {} are not a double root",
                chunk[0], chunk[1]
            )));
        }
        band_pairs.push((chunk[0], chunk[1]));
    }

    if inside.len() != outside.len() {
        return Err(Error::PairingFailure(format!(
            "{} roots inside the circle vs {} outside",
            inside.len(),
            outside.len()
        )));
    }

    let mut pairs: Vec<(Complex64, Complex64, bool)> = Vec::with_capacity(n);
    if !inside.is_empty() {
        let cost: Vec<Vec<f64>> = inside
            .iter()
            .map(|&i| {
                let target = i.conj().inv();
                outside
                    .iter()
                    .map(|&o| relative_distance(o, target))
                    .collect()
            })
            .collect();
        let perm = min_cost_assignment(&cost);
        for (i, &o_index) in perm.iter().enumerate() {
            if cost[i][o_index] > cfg.pairing_tol {
                return Err(Error::PairingFailure(format!(
                    "root {} has no reciprocal-conjugate partner within {:.3e}",
                    inside[i], cfg.pairing_tol
                )));
            }
            pairs.push((inside[i], outside[o_index], false));
        }
    }
    pairs.extend(band_pairs.into_iter().map(|(a, b)| (a, b, true)));
    pairs.sort_by(|a, b| a.0.re.total_cmp(&b.0.re).then(a.0.im.total_cmp(&b.0.im)));

    let degenerate: Vec<usize> = pairs
        .iter()
        .enumerate()
        .filter(|(_, p)| p.2)
        .map(|(i, _)| i)
        .collect();
    let pairs: Vec<(Complex64, Complex64)> = pairs.into_iter().map(|(a, b, _)| (a, b)).collect();

    // |b|² · ‖monic(inside)‖² = c[0]
    let monic = expand_monic(&pairs.iter().map(|&(i, _)| i).collect::<Vec<_>>());
    let norm_sqr: f64 = monic.iter().map(|c| c.norm_sqr()).sum();
    let scale = (s.c0() / norm_sqr).sqrt();

    let pairing = RootPairing {
        pairs,
        scale,
        degenerate,
    };

    // reconstruction self-check catches spectra that pass the root tests but
    // are still inconsistent
    let rebuilt = intensity(&synthesize(&pairing.minimum_phase_root_form()?)?);
    if max_diff(rebuilt.coeffs(), s.coeffs()) > RECONSTRUCTION_TOL * s.max_abs() {
        return Err(Error::PairingFailure(
            "reconstructed intensity does not match the input spectrum".into(),
        ));
    }

    Ok(pairing)
}

/// Builds all 2^N side-choice candidates of a factorable spectrum. Agrees
/// with [`enumerate_candidates`] (same class partition) when the spectrum
/// came from a known signal.
pub fn candidates_from_intensity(s: &IntensitySpectrum, cfg: &Config) -> Result<CandidateSet> {
    let pairing = factor_intensity(s, cfg)?;
    let rf = pairing.minimum_phase_root_form()?;
    candidates_from_root_form(s.clone(), &rf, cfg)
}

/// The spectral-factorization candidate choosing the smaller-modulus root of
/// every pair; all roots of the result lie in the closed unit disk (up to
/// `circle_tol`).
pub fn minimum_phase(s: &IntensitySpectrum, cfg: &Config) -> Result<PhaseClassRep> {
    let pairing = factor_intensity(s, cfg)?;
    let signal = synthesize(&pairing.minimum_phase_root_form()?)?;
    Ok(canonicalize_phase(&signal))
}
