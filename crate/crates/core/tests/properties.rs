use std::f64::consts::{FRAC_PI_2, FRAC_PI_4};

use dilaton_gme::analytic::{e_accessible, e_general, e_inaccessible};
use dilaton_gme::gme::{gme_xstate, scenario_gme};
use dilaton_gme::modes_state::{
    build_initial_state, expand_kruskal, partial_trace, scenario_density, Mode,
};
use dilaton_gme::xstate::{build_block_matrix, extract_xstate, DEFAULT_TOL};
use dilaton_gme::{BlackHoleParams, BogoliubovPair, ScenarioSpec};
use nalgebra::DMatrix;
use proptest::prelude::*;
use proptest::sample::subsequence;

/// (N, n, p) with N <= 6, n <= 4, n < N.
fn shape() -> impl Strategy<Value = (usize, usize, usize)> {
    (1usize..=4).prop_flat_map(|n| (n + 1..=6, Just(n), 0..=n))
}

fn pair_at(d: f64) -> BogoliubovPair {
    BlackHoleParams::new(1.0, d, 1.0).unwrap().bogoliubov()
}

fn spec((big_n, n, p): (usize, usize, usize), theta: f64) -> ScenarioSpec {
    ScenarioSpec::new(big_n, n, p, n - p, theta).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn bogoliubov_normalised_and_ordered(d in 0.0f64..=1.0, m in 0.5f64..3.0, w in 0.1f64..3.0) {
        let pair = BlackHoleParams::new(m, d * m, w).unwrap().bogoliubov();
        prop_assert!((pair.alpha().powi(2) + pair.beta().powi(2) - 1.0).abs() <= 1e-14);
        prop_assert!(pair.alpha() >= pair.beta());
    }

    #[test]
    fn amplitude_rule(s in shape(), theta in 0.05f64..1.5, d in 0.0f64..=1.0) {
        let spec = spec(s, theta);
        let pair = pair_at(d);
        let psi = expand_kruskal(&build_initial_state(&spec), &pair, &spec).unwrap();
        let n = spec.n_horizon();
        let flat = spec.n_flat();
        let mut expected = 0usize;
        for pattern in 0u64..(1 << n) {
            let w = pattern.count_ones() as i32;
            let amp = theta.cos() * pair.alpha().powi(n as i32 - w) * pair.beta().powi(w);
            let label = (pattern << n) | pattern;
            if amp.abs() >= 1e-15 {
                expected += 1;
                prop_assert!((psi.amplitude(label) - amp).abs() <= 1e-14);
            } else {
                prop_assert_eq!(psi.amplitude(label), 0.0);
            }
        }
        let one_bar = ((((1u64 << flat) - 1) << n) | ((1 << n) - 1)) << n;
        prop_assert!((psi.amplitude(one_bar) - theta.sin()).abs() <= 1e-14);
        prop_assert_eq!(psi.nnz(), expected + 1);
        prop_assert!((psi.norm_sqr() - 1.0).abs() <= 1e-12);
    }

    #[test]
    fn trace_preserved(s in shape(), theta in 0.0f64..=FRAC_PI_2, d in 0.0f64..=1.0, seed in any::<u64>()) {
        let spec = spec(s, theta);
        let psi = expand_kruskal(&build_initial_state(&spec), &pair_at(d), &spec).unwrap();
        let all = psi.layout().modes().to_vec();
        let keep: Vec<Mode> = all.iter().enumerate().filter(|(i, _)| seed >> i & 1 == 1).map(|(_, m)| *m).collect();
        prop_assume!(!keep.is_empty());
        let rho = partial_trace(&psi, &keep).unwrap();
        prop_assert!((rho.trace() - 1.0).abs() <= 1e-12);
        prop_assert!(rho.asymmetry() <= 1e-15);
    }

    #[test]
    fn two_step_trace_matches_one_step(
        s in shape(), theta in 0.0f64..=FRAC_PI_2, d in 0.0f64..=1.0, a in any::<u64>(), b in any::<u64>()
    ) {
        let spec = spec(s, theta);
        let psi = expand_kruskal(&build_initial_state(&spec), &pair_at(d), &spec).unwrap();
        let all = psi.layout().modes().to_vec();
        let first: Vec<Mode> = all.iter().enumerate().filter(|(i, _)| a >> i & 1 == 1).map(|(_, m)| *m).collect();
        let second: Vec<Mode> = first.iter().enumerate().filter(|(i, _)| b >> i & 1 == 1).map(|(_, m)| *m).collect();
        prop_assume!(!second.is_empty());
        let two = partial_trace(&psi, &first).unwrap().partial_trace(&second).unwrap();
        let one = partial_trace(&psi, &second).unwrap();
        prop_assert!(two.max_abs_diff(&one) <= 1e-13);
    }

    #[test]
    fn scenario_density_is_psd(s in shape(), theta in 0.0f64..=FRAC_PI_2, d in 0.0f64..=1.0) {
        let spec = spec(s, theta);
        let rho = scenario_density(&spec, &pair_at(d)).unwrap();
        let dim = 1usize << rho.n_modes();
        let m = DMatrix::from_row_slice(dim, dim, &rho.to_dense().unwrap());
        let eig = m.symmetric_eigen();
        let min = eig.eigenvalues.iter().copied().fold(f64::INFINITY, f64::min);
        prop_assert!(min >= -1e-12, "min eigenvalue {}", min);
        prop_assert!((eig.eigenvalues.sum() - 1.0).abs() <= 1e-12);
    }

    #[test]
    fn dual_construction(s in shape(), theta in 0.0f64..=FRAC_PI_2, d in 0.0f64..=1.0) {
        let spec = spec(s, theta);
        let pair = pair_at(d);
        let traced = scenario_density(&spec, &pair).unwrap();
        let direct = build_block_matrix(&spec, &pair).unwrap();
        prop_assert!(traced.max_abs_diff(&direct) <= 1e-13);
    }

    #[test]
    fn permutation_invariance(
        (big_n, n, picks) in (1usize..=4)
            .prop_flat_map(|n| (n + 1..=6, Just(n), (0..=n)))
            .prop_flat_map(|(big_n, n, p)| (Just(big_n), Just(n), subsequence((1..=n).collect::<Vec<_>>(), p))),
        theta in 0.05f64..1.5,
        d in 0.0f64..=1.0,
    ) {
        let p = picks.len();
        let spec = ScenarioSpec::new(big_n, n, p, n - p, theta).unwrap();
        let pair = pair_at(d);
        let psi = expand_kruskal(&build_initial_state(&spec), &pair, &spec).unwrap();
        let mut keep: Vec<Mode> = (1..=spec.n_flat()).map(Mode::Flat).collect();
        for i in 1..=n {
            keep.push(if picks.contains(&i) { Mode::Out(i) } else { Mode::In(i) });
        }
        let permuted = gme_xstate(&extract_xstate(&partial_trace(&psi, &keep).unwrap(), DEFAULT_TOL).unwrap());
        let canonical = scenario_gme(&spec, &pair).unwrap();
        prop_assert!((permuted - canonical).abs() <= 1e-12);
    }

    #[test]
    fn independent_of_party_count(s in shape(), theta in 0.0f64..=FRAC_PI_2, d in 0.0f64..=1.0) {
        prop_assume!(s.0 < 6);
        let pair = pair_at(d);
        let small = scenario_gme(&spec(s, theta), &pair).unwrap();
        let large = scenario_gme(&spec((s.0 + 1, s.1, s.2), theta), &pair).unwrap();
        prop_assert!((small - large).abs() <= 1e-12);
    }

    #[test]
    fn theta_symmetry_and_bounds(theta in 0.0f64..=FRAC_PI_2, d in 0.0f64..=1.0, p in 0u32..40, q in 0u32..40) {
        let pair = pair_at(d);
        let e = e_general(theta, &pair, p, q);
        prop_assert!((e - e_general(FRAC_PI_2 - theta, &pair, p, q)).abs() <= 1e-13);
        prop_assert!((0.0..=1.0).contains(&e));
        prop_assert!(e <= e_general(FRAC_PI_4, &pair, p, q) + 1e-15);
    }

    #[test]
    fn general_form_reduces(theta in 0.0f64..=FRAC_PI_2, d in 0.0f64..=1.0, n in 0u32..100) {
        let pair = pair_at(d);
        prop_assert_eq!(e_general(theta, &pair, n, 0), e_accessible(theta, &pair, n));
        prop_assert_eq!(e_general(theta, &pair, 0, n), e_inaccessible(theta, &pair, n));
    }
}
