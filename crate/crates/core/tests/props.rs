//! Property tests for the statistic invariants and the cumulant engine's
//! symmetries.

use cbe_core::*;
use proptest::prelude::*;

fn arb_phases() -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(0.0..std::f64::consts::TAU, 2..40)
}

fn arb_trigpoly() -> impl Strategy<Value = FunctionSpec> {
    prop::collection::vec((0u32..=5, -2.0..2.0f64), 1..4)
        .prop_map(|coeffs| FunctionSpec::Trigpoly { coeffs })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn spectral_route_equals_direct_route(phases in arb_phases(), spec in arb_trigpoly()) {
        let cfg = PhaseConfiguration::new(phases).unwrap();
        let series = circle_coeffs(&spec, 8).unwrap();
        let tr = traces(&cfg, series.k_max().max(1));
        let spectral = pair_sum_spectral(&tr, &series, cfg.n()).unwrap().value;
        let direct = pair_sum_direct(&cfg, &spec, 1.0).unwrap().value;
        prop_assert!(
            (spectral - direct).abs() <= 1e-9 * (1.0 + direct.abs()),
            "{spectral} vs {direct}"
        );
    }

    #[test]
    fn pair_sum_is_rotation_invariant(
        phases in arb_phases(),
        spec in arb_trigpoly(),
        phi in 0.0..std::f64::consts::TAU,
    ) {
        let cfg = PhaseConfiguration::new(phases).unwrap();
        let base = pair_sum_direct(&cfg, &spec, 1.0).unwrap().value;
        let rotated = pair_sum_direct(&cfg.rotated(phi), &spec, 1.0).unwrap().value;
        prop_assert!(
            (base - rotated).abs() <= 1e-9 * (1.0 + base.abs()),
            "rotation by {phi} moved the statistic: {base} vs {rotated}"
        );
    }

    #[test]
    fn pair_sum_is_reflection_invariant(phases in arb_phases(), spec in arb_trigpoly()) {
        let cfg = PhaseConfiguration::new(phases).unwrap();
        let base = pair_sum_direct(&cfg, &spec, 1.0).unwrap().value;
        let mirrored = pair_sum_direct(&cfg.reflected(), &spec, 1.0).unwrap().value;
        prop_assert!(
            (base - mirrored).abs() <= 1e-9 * (1.0 + base.abs()),
            "{base} vs {mirrored}"
        );
    }

    #[test]
    fn trace_bounds_hold(phases in arb_phases(), k_max in 1usize..12) {
        let cfg = PhaseConfiguration::new(phases).unwrap();
        let tr = traces(&cfg, k_max);
        prop_assert_eq!(tr.at(0).re, cfg.n() as f64);
        prop_assert_eq!(tr.at(0).im, 0.0);
        for k in 0..=k_max as i64 {
            prop_assert!(tr.at(k).norm() <= cfg.n() as f64 + 1e-9);
        }
    }

    #[test]
    fn spacings_telescope(phases in arb_phases()) {
        let cfg = PhaseConfiguration::new(phases).unwrap();
        let sp = spacings(&cfg).unwrap();
        let total: f64 = sp.iter().sum();
        let n = cfg.n() as f64;
        let expect = n * (cfg.phases()[cfg.n() - 1] - cfg.phases()[0]);
        prop_assert!((total - expect).abs() <= 1e-9 * (1.0 + expect.abs()));
        prop_assert!(total < std::f64::consts::TAU * n);
    }

    #[test]
    fn cumulants_are_permutation_and_conjugation_symmetric(
        raw in prop::collection::vec(-8i64..=8, 2..=4),
        rotate_by in 0usize..4,
        n_size in 1i64..=10,
    ) {
        let ks: Vec<i64> = raw.into_iter().filter(|&k| k != 0).collect();
        prop_assume!(ks.len() >= 2);
        let base = trace_cumulant(&FrequencyVector::new(ks.clone(), n_size).unwrap());

        let mut rotated = ks.clone();
        rotated.rotate_left(rotate_by % ks.len());
        prop_assert_eq!(
            base,
            trace_cumulant(&FrequencyVector::new(rotated, n_size).unwrap())
        );

        let mut reversed = ks.clone();
        reversed.reverse();
        prop_assert_eq!(
            base,
            trace_cumulant(&FrequencyVector::new(reversed, n_size).unwrap())
        );

        let negated: Vec<i64> = ks.iter().map(|&k| -k).collect();
        prop_assert_eq!(
            base,
            trace_cumulant(&FrequencyVector::new(negated, n_size).unwrap())
        );
    }
}
