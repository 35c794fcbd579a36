use hardy_lab::generators::{
    model_space, random_defect_instance, random_inner_multiplier, random_subspace, toeplitz_kernel,
    LaurentSymbol,
};
use hardy_lab::inner::{blaschke_series, is_inner, BlaschkeSpec};
use hardy_lab::invariance::{
    almost_defect, beurling_extract, check_almost_characterization, decompose_with_defect, defect,
    extract_g, hitt_decompose, is_nearly_invariant, theta_psi_crosscheck,
};
use hardy_lab::subspace::{orthonormalize, projector_distance};
use hardy_lab::{Field, TruncatedSeries};
use num_complex::Complex64;
use proptest::prelude::*;

fn symmetric_zeros() -> impl Strategy<Value = Vec<Complex64>> {
    prop::collection::vec((0.1..0.6f64, 0.3..2.8f64, any::<bool>()), 1..=2).prop_map(|v| {
        let mut out = Vec::new();
        for (r, t, pair) in v {
            if pair {
                let a = Complex64::from_polar(r, t);
                out.push(a);
                out.push(a.conj());
            } else {
                out.push(Complex64::new(if t > 1.5 { -r } else { r }, 0.0));
            }
        }
        out
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn model_spaces_have_no_defect(z in symmetric_zeros(), k in 0usize..3) {
        let theta = blaschke_series(&BlaschkeSpec::real_positive(z, k).unwrap(), 128).unwrap();
        let m = model_space(&theta, 128).unwrap();
        prop_assert_eq!(defect(&m, 1e-8).unwrap().defect, 0);
        prop_assert_eq!(almost_defect(&m, 1e-8).unwrap().defect, 0);
        prop_assert!(is_nearly_invariant(&m, 1e-8).unwrap());
    }

    #[test]
    fn almost_defect_dominates_defect(seed in 0u64..10_000, d in 1usize..6) {
        let m = random_subspace(seed, 32, d, Field::Real).unwrap();
        let n = defect(&m, 1e-8).unwrap().defect;
        prop_assert!(almost_defect(&m, 1e-8).unwrap().defect >= n);
        prop_assert_eq!(n == 0, is_nearly_invariant(&m, 1e-8).unwrap());
    }

    #[test]
    fn extract_g_ignores_basis_choice(seed in 0u64..10_000, d in 2usize..6) {
        let m = random_subspace(seed, 24, d, Field::Real).unwrap();
        let mut v = m.vectors();
        v.reverse();
        let mixed: Vec<TruncatedSeries> = v
            .iter()
            .enumerate()
            .map(|(i, x)| x.add(&v[(i + 1) % v.len()].scale(Complex64::new(0.5, 0.0))).unwrap())
            .collect();
        let m2 = orthonormalize(24, Field::Real, &mixed, 1e-10).unwrap();
        prop_assert!(projector_distance(&m, &m2).unwrap() <= 1e-12);
        let g1 = extract_g(&m).unwrap();
        let g2 = extract_g(&m2).unwrap();
        prop_assert!(g1.sub(&g2).unwrap().norm() <= 1e-10);
        prop_assert!(g1.coeff(0).re > 0.0);
        prop_assert_eq!(g1.hat(), g1.clone());
    }
}

#[test]
fn generated_inner_multipliers_decompose() {
    for seed in 0..8 {
        let inst = random_inner_multiplier(seed, 128, 1e-8).unwrap();
        let h = hitt_decompose(&inst.subspace, 1e-8).unwrap();
        assert!(h.rep_error <= 1e-6, "seed {seed}");
        assert!(h.isometry_error <= 1e-8, "seed {seed}");
        assert_eq!(h.invariance_defect, 0, "seed {seed}");
        assert_eq!(h.g.hat(), h.g);
        // the complex engine on M + iM finds N + iN
        let hc = hitt_decompose(&inst.subspace.complexify().unwrap(), 1e-8).unwrap();
        assert!(projector_distance(&h.n.complexify().unwrap(), &hc.n).unwrap() <= 1e-6);
        assert!(check_almost_characterization(&inst.subspace, 1e-8, 1e-6).unwrap().pass);
    }
}

#[test]
fn generated_defect_instances_round_trip() {
    for seed in 0..8 {
        for n in 1..=2 {
            let inst = random_defect_instance(seed, n, 128, 1e-8).unwrap();
            let report = defect(&inst.subspace, 1e-8).unwrap();
            assert!(report.defect <= n);
            let d = decompose_with_defect(&inst.subspace, 1e-8).unwrap();
            assert!(d.rep_error <= 1e-6, "seed {seed} n {n}");
            assert!(d.norm_identity_error <= 1e-6, "seed {seed} n {n}");
            assert_eq!(d.invariance_defect, 0);
            assert!(check_almost_characterization(&inst.subspace, 1e-8, 1e-6).unwrap().pass);
        }
    }
}

#[test]
fn toeplitz_kernels_are_nearly_invariant() {
    let symbols = [
        LaurentSymbol::from_terms(&[(-1, Complex64::new(1.0, 0.0))]),
        LaurentSymbol::from_terms(&[(-2, Complex64::new(1.0, 0.0)), (0, Complex64::new(-0.25, 0.0))]),
        LaurentSymbol::from_terms(&[
            (-3, Complex64::new(1.0, 0.0)),
            (-1, Complex64::new(0.3, 0.0)),
            (1, Complex64::new(0.2, 0.0)),
        ]),
        LaurentSymbol::from_terms(&[(-2, Complex64::new(0.0, 1.0)), (1, Complex64::new(0.5, 0.0))]),
    ];
    for sym in &symbols {
        let inst = toeplitz_kernel(sym, 128, 1e-10).unwrap();
        assert!(!inst.subspace.is_zero());
        assert!(is_nearly_invariant(&inst.subspace, 1e-6).unwrap());
        assert!(inst.pass());
    }
}

#[test]
fn beurling_recovers_generating_inner_function() {
    let spec = BlaschkeSpec::real_positive(
        vec![Complex64::new(0.3, 0.4), Complex64::new(0.3, -0.4), Complex64::new(-0.5, 0.0)],
        0,
    )
    .unwrap();
    let order = 128;
    let theta = blaschke_series(&spec, order).unwrap();
    let m = model_space(&theta, order).unwrap().orthocomplement();
    let b = beurling_extract(&m, Field::Real, 1e-6).unwrap();
    let err = b.theta.sub(&theta).unwrap().norm().min(b.theta.add(&theta).unwrap().norm());
    assert!(err <= 1e-6);
    assert!(is_inner(&b.theta, 512, 1e-8).pass);
}

#[test]
fn theta_and_psi_agree_on_generated_instances() {
    for seed in 0..4 {
        let inst = random_inner_multiplier(seed, 128, 1e-8).unwrap();
        let cert = theta_psi_crosscheck(&inst.subspace, 1e-8, 1e-6).unwrap();
        assert!(cert.pass, "seed {seed}: {cert:?}");
    }
}
