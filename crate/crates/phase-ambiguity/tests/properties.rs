//! Property tests for the algebraic invariants of the library.

mod common;

use common::*;
use num_complex::Complex64;
use proptest::prelude::*;
use rand::RngExt;

use phase_ambiguity::{
    canonicalize_phase, classify_pair, convolve, enumerate_candidates, evaluate_intensity,
    fixed_last_modulus, flip, intensity, reflect_conjugate, spectra_equal, synthesize,
    to_root_form, trivial_equivalent, Config, FlipMask, RootForm, Signal,
};

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Strategy: a full-support signal with interior coefficients in the unit
/// square and endpoints on an annulus.
fn signal_strategy(max_n: usize) -> impl Strategy<Value = Signal> {
    (2..=max_n + 1)
        .prop_flat_map(|len| {
            (
                proptest::collection::vec((-1.0f64..1.0, -1.0f64..1.0), len - 2),
                (0.3f64..1.2, 0.0f64..std::f64::consts::TAU),
                (0.3f64..1.2, 0.0f64..std::f64::consts::TAU),
            )
        })
        .prop_map(|(interior, (r0, a0), (r1, a1))| {
            let mut coeffs = vec![Complex64::from_polar(r0, a0)];
            coeffs.extend(interior.into_iter().map(|(re, im)| c(re, im)));
            coeffs.push(Complex64::from_polar(r1, a1));
            Signal::new(coeffs).expect("annulus endpoints guarantee full support")
        })
}

proptest! {
    #[test]
    fn intensity_is_exactly_hermitian(x in signal_strategy(9)) {
        let s = intensity(&x);
        let n = s.degree() as isize;
        for k in 0..=n {
            prop_assert_eq!(s.coeff(-k), s.coeff(k).conj());
        }
        prop_assert_eq!(s.coeff(0).im, 0.0);
        prop_assert!(s.coeff(0).re > 0.0);
    }

    #[test]
    fn trivial_ambiguities_preserve_intensity(x in signal_strategy(9), theta in 0.0..std::f64::consts::TAU) {
        let s = intensity(&x);
        let rotated = x.scaled(Complex64::from_polar(1.0, theta));
        prop_assert!(spectra_equal(&s, &intensity(&rotated), 1e-10).unwrap());
        prop_assert!(spectra_equal(&s, &intensity(&reflect_conjugate(&x)), 1e-10).unwrap());
    }

    #[test]
    fn canonicalization_is_idempotent_and_orbit_constant(
        x in signal_strategy(8),
        theta in 0.0..std::f64::consts::TAU,
    ) {
        let canon = canonicalize_phase(&x);
        let again = canonicalize_phase(canon.signal());
        prop_assert_eq!(canon.coeffs(), again.coeffs());

        let rotated = canonicalize_phase(&x.scaled(Complex64::from_polar(1.0, theta)));
        prop_assert!(max_distance(canon.coeffs(), rotated.coeffs()) <= 1e-12 * x.max_abs());
    }

    #[test]
    fn trivial_equivalence_relation(
        x in signal_strategy(7),
        t1 in 0.0..std::f64::consts::TAU,
        t2 in 0.0..std::f64::consts::TAU,
        use_reflection in proptest::bool::ANY,
    ) {
        // reflexive and symmetric on generic samples, transitive along a
        // chain built from the group action
        prop_assert!(trivial_equivalent(&x, &x, 1e-10).unwrap());
        let b = if use_reflection {
            reflect_conjugate(&x).scaled(Complex64::from_polar(1.0, t1))
        } else {
            x.scaled(Complex64::from_polar(1.0, t1))
        };
        let c_sig = b.scaled(Complex64::from_polar(1.0, t2));
        prop_assert!(trivial_equivalent(&x, &b, 1e-10).unwrap());
        prop_assert!(trivial_equivalent(&b, &x, 1e-10).unwrap());
        prop_assert!(trivial_equivalent(&b, &c_sig, 1e-10).unwrap());
        prop_assert!(trivial_equivalent(&x, &c_sig, 1e-10).unwrap());
    }

    #[test]
    fn convolution_is_bilinear_and_multiplicative(
        a in signal_strategy(5),
        b in signal_strategy(5),
        scale_re in -2.0f64..2.0,
        scale_im in -2.0f64..2.0,
    ) {
        let alpha = c(scale_re, scale_im);
        prop_assume!(alpha.norm() > 1e-3);

        let ab = convolve(a.coeffs(), b.coeffs()).unwrap();

        // scaling one factor scales the product
        let scaled: Vec<Complex64> = a.coeffs().iter().map(|v| v * alpha).collect();
        let scaled_product = convolve(&scaled, b.coeffs()).unwrap();
        let expected: Vec<Complex64> = ab.coeffs().iter().map(|v| v * alpha).collect();
        prop_assert!(max_distance(scaled_product.coeffs(), &expected) <= 1e-12 * max_norm(&expected));

        // ẑ = â·b̂ at 16 unit-circle points
        for k in 0..16 {
            let theta = std::f64::consts::TAU * (k as f64 + 0.37) / 16.0;
            let w = Complex64::from_polar(1.0, theta);
            let eval = |v: &[Complex64]| v.iter().rev().fold(c(0.0, 0.0), |acc, &ci| acc * w + ci);
            let lhs = eval(ab.coeffs());
            let rhs = eval(a.coeffs()) * eval(b.coeffs());
            prop_assert!((lhs - rhs).norm() <= 1e-10 * rhs.norm().max(1.0));
        }
    }

    #[test]
    fn flip_family_is_commuting_involutions(mask1 in 0u32..16, mask2 in 0u32..16, seed in 0u64..1000) {
        let mut r = rng(seed);
        let (leading, roots) = sample_root_data(&mut r, 4);
        let rf = RootForm::new(leading, roots).unwrap();

        let m1 = FlipMask::new(mask1);
        let m2 = FlipMask::new(mask2);
        let twice = flip(&flip(&rf, m1), m1);
        prop_assert!(max_distance(twice.roots(), rf.roots()) <= 1e-13);
        prop_assert!((twice.leading() - rf.leading()).norm() <= 1e-13 * rf.leading().norm());

        let ab = flip(&flip(&rf, m1), m2);
        let ba = flip(&flip(&rf, m2), m1);
        prop_assert!(max_distance(ab.roots(), ba.roots()) <= 1e-13);
        prop_assert!((ab.leading() - ba.leading()).norm() <= 1e-13 * ab.leading().norm());
    }

    #[test]
    fn synthesis_is_permutation_invariant(seed in 0u64..1000, rotation in 1usize..5) {
        let mut r = rng(seed);
        let (leading, mut roots) = sample_root_data(&mut r, 6);
        let base = synthesize(&RootForm::new(leading, roots.clone()).unwrap()).unwrap();
        roots.rotate_left(rotation);
        let last = roots.len() - 1;
        roots.swap(0, last);
        let permuted = synthesize(&RootForm::new(leading, roots).unwrap()).unwrap();
        prop_assert!(max_distance(base.coeffs(), permuted.coeffs()) <= 1e-11 * base.max_abs());
    }
}

#[test]
fn intensity_is_nonnegative_on_the_circle() {
    // 1000 random angles spread over 20 random signals
    let mut r = rng(0xA11CE);
    for trial in 0..20u64 {
        let n = 2 + (trial % 8) as usize;
        let (x, _, _) = sample_generic_signal(&mut r, n);
        let s = intensity(&x);
        let floor = -1e-9 * s.c0();
        for _ in 0..50 {
            let theta = std::f64::consts::TAU * r.random::<f64>();
            let value = evaluate_intensity(&s, theta).unwrap();
            assert!(value >= floor, "A({theta}) = {value} below {floor}");
        }
    }
}

#[test]
fn root_form_round_trip_500_signals() {
    let cfg = Config::default();
    let mut r = rng(0xB0B);
    for trial in 0..500u64 {
        let n = 1 + (trial % 12) as usize;
        let (x, _, _) = sample_generic_signal(&mut r, n);
        let back = synthesize(&to_root_form(&x, &cfg).unwrap()).unwrap();
        let canon_x = canonicalize_phase(&x);
        let canon_back = canonicalize_phase(&back);
        assert!(
            max_distance(canon_x.coeffs(), canon_back.coeffs()) <= 1e-8 * x.max_abs(),
            "round trip failed at trial {trial} (N = {n})"
        );
    }
}

#[test]
fn full_mask_flip_is_reflection_mod_phase() {
    let cfg = Config::default();
    let mut r = rng(0xF11F);
    for trial in 0..60u64 {
        let n = 1 + (trial % 9) as usize;
        let (x, _, _) = sample_generic_signal(&mut r, n);
        let rf = to_root_form(&x, &cfg).unwrap();
        let full = synthesize(&flip(&rf, FlipMask::full(n))).unwrap();
        assert!(trivial_equivalent(&full, &reflect_conjugate(&x), 1e-8).unwrap());
    }
}

#[test]
fn every_flip_preserves_intensity() {
    let cfg = Config::default();
    let mut r = rng(0x1234);
    for trial in 0..12u64 {
        let n = 2 + (trial % 9) as usize; // up to N = 10
        let (x, _, _) = sample_generic_signal(&mut r, n);
        let rf = to_root_form(&x, &cfg).unwrap();
        let s = intensity(&x);
        for bits in 0..(1u32 << n) {
            let y = synthesize(&flip(&rf, FlipMask::new(bits))).unwrap();
            assert!(spectra_equal(&s, &intensity(&y), 1e-8).unwrap());
        }
    }
}

#[test]
fn middle_components_are_nontrivial() {
    // candidates with 0 < popcount < N are never trivially equivalent to x
    let cfg = Config::default();
    let mut r = rng(0x5EED);
    for trial in 0..20u64 {
        let n = 2 + (trial % 5) as usize;
        let (x, _, _) = sample_generic_signal(&mut r, n);
        let set = enumerate_candidates(&x, &cfg).unwrap();
        for (mask, cand) in set.candidates() {
            let popcount = mask.popcount();
            if popcount > 0 && (popcount as usize) < n {
                assert!(!trivial_equivalent(&x, cand.signal(), 1e-6).unwrap());
            }
        }
    }
}

#[test]
fn classification_tracks_flip_count() {
    let cfg = Config::default();
    let mut r = rng(0xC1A5);
    for trial in 0..10u64 {
        let n = 2 + (trial % 5) as usize;
        let (x, leading, roots) = sample_generic_signal(&mut r, n);
        for bits in 0..(1u32 << n) {
            let (flead, froots) = oracle_flip(leading, &roots, bits);
            let xp = Signal::new(oracle_expand(flead, &froots)).unwrap();
            let cls = classify_pair(&x, &xp, 1e-7, &cfg).unwrap();
            assert_eq!(cls.components, vec![bits.count_ones() as usize]);
        }
    }
}

#[test]
fn fixed_modulus_predicate_is_phase_invariant() {
    let system = fixed_last_modulus(6, 2.5);
    let tuple = system.sample(77).unwrap();
    for theta in [0.0, 1.0, 2.5, 4.9] {
        let rotated = tuple[0].scaled(Complex64::from_polar(1.0, theta));
        assert!(system.predicate(&[&rotated], 1e-12));
    }
}
