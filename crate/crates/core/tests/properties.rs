use std::f64::consts::PI;

use num_complex::Complex64;
use proptest::prelude::*;

use cglmp::operator::ell;
use cglmp::spectral::{autocorrelation_with, toeplitz_matvec_with, MatvecPath};
use cglmp::{
    app_state, bell_value_probabilistic, bell_value_schmidt, correlation_q, dense_max_eigenpair,
    f_coeff, joint_probabilities, make_optimal_settings, max_eigenpair_default, mes_state, mod_d,
    reduced_bell_coefficients, reduced_bell_coefficients_sinesum, GeneralState, MeasurementSettings,
    SchmidtState,
};

fn general_state(d: usize) -> impl Strategy<Value = GeneralState> {
    prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), d * d)
        .prop_filter("nonzero", |v| v.iter().any(|(a, b)| a.abs() + b.abs() > 1e-3))
        .prop_map(move |v| {
            let raw: Vec<Complex64> = v.into_iter().map(|(a, b)| Complex64::new(a, b)).collect();
            let norm = raw.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            GeneralState::new(d, raw.into_iter().map(|z| z / norm).collect()).unwrap()
        })
}

fn schmidt_state(d: usize) -> impl Strategy<Value = SchmidtState> {
    prop::collection::vec(-1.0f64..1.0, d)
        .prop_filter("nonzero", |v| v.iter().any(|x| x.abs() > 1e-3))
        .prop_map(|v| SchmidtState::normalized(v).unwrap())
}

fn settings(d: usize) -> impl Strategy<Value = MeasurementSettings> {
    let phases = || prop::collection::vec(-PI..PI, d);
    (phases(), phases(), phases(), phases())
        .prop_map(|(a, b, c, e)| MeasurementSettings::new(a, b, c, e).unwrap())
}

fn state_and_settings() -> impl Strategy<Value = (GeneralState, MeasurementSettings)> {
    (2usize..7).prop_flat_map(|d| (general_state(d), settings(d)))
}

fn dim_and_schmidt(max_d: usize) -> impl Strategy<Value = SchmidtState> {
    (2usize..=max_d).prop_flat_map(schmidt_state)
}

proptest! {
    #[test]
    fn mod_d_is_periodic_and_in_range(x in -10_000i64..10_000, d in 1i64..200) {
        let m = mod_d(x, d).unwrap();
        prop_assert!((0..d).contains(&m));
        prop_assert_eq!(m, mod_d(x + d, d).unwrap());
    }

    #[test]
    fn f_coeff_is_bounded(d in 2usize..40, i in 1usize..=2, j in 1usize..=2, m in 0usize..40, n in 0usize..40) {
        let (m, n) = (m % d, n % d);
        prop_assert!(f_coeff(i, j, m, n, d).unwrap().abs() <= (d as f64 - 1.0) / 2.0);
    }

    #[test]
    fn probabilities_are_a_distribution((state, s) in state_and_settings(), a in 1usize..=2, b in 1usize..=2) {
        let t = joint_probabilities(&state, &s, a, b).unwrap();
        prop_assert!(t.entries().iter().all(|&p| p >= 0.0));
        prop_assert!((t.total() - 1.0).abs() < 1e-10);
    }

    #[test]
    fn correlations_and_bell_value_are_bounded((state, s) in state_and_settings()) {
        for (i, j) in [(1, 1), (1, 2), (2, 1), (2, 2)] {
            let q = correlation_q(&state, &s, i, j).unwrap();
            prop_assert!(q.abs() <= 1.0 + 1e-10, "Q_{}{} = {}", i, j, q);
        }
        prop_assert!(bell_value_probabilistic(&state, &s).unwrap().value().abs() < 4.0);
    }

    #[test]
    fn global_phase_does_not_change_probabilities((state, s) in state_and_settings(), theta in -PI..PI) {
        let rotated = state.with_global_phase(theta);
        let a = joint_probabilities(&state, &s, 2, 1).unwrap();
        let b = joint_probabilities(&rotated, &s, 2, 1).unwrap();
        for (x, y) in a.entries().iter().zip(b.entries()) {
            prop_assert!((x - y).abs() < 1e-13);
        }
    }

    #[test]
    fn probability_route_matches_operator_route(state in dim_and_schmidt(24)) {
        let d = state.dim();
        let prob = bell_value_probabilistic(&GeneralState::from(&state), &make_optimal_settings(d).unwrap()).unwrap();
        let quad = bell_value_schmidt(&state, &reduced_bell_coefficients(d).unwrap()).unwrap();
        prop_assert!((prob.value() - quad.value()).abs() < 1e-9);
    }

    #[test]
    fn maximal_eigenvalue_dominates_every_state(state in dim_and_schmidt(40)) {
        let d = state.dim();
        let op = reduced_bell_coefficients(d).unwrap();
        let lambda = max_eigenpair_default(&op).unwrap().eigenvalue;
        let v = bell_value_schmidt(&state, &op).unwrap().value();
        prop_assert!(v <= lambda + 1e-12);
    }

    #[test]
    fn product_paths_agree(v in prop::collection::vec(-1.0f64..1.0, 2..700)) {
        let op = reduced_bell_coefficients(v.len()).unwrap();
        let direct = toeplitz_matvec_with(&op, &v, MatvecPath::Direct).unwrap();
        let fast = toeplitz_matvec_with(&op, &v, MatvecPath::Fast).unwrap();
        let scale = direct.iter().fold(1e-300f64, |m, x| m.max(x.abs()));
        for (x, y) in direct.iter().zip(&fast) {
            prop_assert!((x - y).abs() / scale < 1e-10);
        }
        let ac_direct = autocorrelation_with(&v, MatvecPath::Direct);
        let ac_fast = autocorrelation_with(&v, MatvecPath::Fast);
        let scale = ac_direct.iter().fold(1e-300f64, |m, x| m.max(x.abs()));
        for (x, y) in ac_direct.iter().zip(&ac_fast) {
            prop_assert!((x - y).abs() / scale < 1e-10);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn coefficient_forms_agree(d in 2usize..=2048) {
        let a = reduced_bell_coefficients(d).unwrap();
        let b = reduced_bell_coefficients_sinesum(d).unwrap();
        for (x, y) in a.coefficients().iter().zip(b.coefficients()) {
            prop_assert!((x - y).abs() < 1e-12);
        }
    }

    #[test]
    fn lanczos_agrees_with_dense(d in 2usize..=512) {
        let op = reduced_bell_coefficients(d).unwrap();
        let lanczos = max_eigenpair_default(&op).unwrap();
        let dense = dense_max_eigenpair(&op).unwrap();
        prop_assert!((lanczos.eigenvalue - dense.eigenvalue).abs() < 1e-8);
        prop_assert!(lanczos.relative_residual() <= 1e-10);
    }
}

#[test]
fn eigenvalue_exceeds_named_states() {
    for d in (2..=300).chain([1000, 5000]) {
        let op = reduced_bell_coefficients(d).unwrap();
        let lambda = max_eigenpair_default(&op).unwrap().eigenvalue;
        let app = bell_value_schmidt(&app_state(d).unwrap(), &op).unwrap().value();
        let mes = bell_value_schmidt(&mes_state(d).unwrap(), &op).unwrap().value();
        assert!(lambda >= app - 1e-12 && lambda >= mes - 1e-12, "d = {d}");
        if d >= 3 {
            assert!(app > mes, "d = {d}");
        }
    }
}

#[test]
fn eigenvalue_increases_with_dimension() {
    let mut prev = 0.0;
    for d in 2..=400 {
        let lambda = max_eigenpair_default(&reduced_bell_coefficients(d).unwrap()).unwrap().eigenvalue;
        assert!(lambda > prev, "d = {d}");
        prev = lambda;
    }
}

#[test]
fn eigenvector_head_follows_inverse_square_roots() {
    let r = max_eigenpair_default(&reduced_bell_coefficients(2048).unwrap()).unwrap();
    let a = &r.eigenvector;
    let measured = [1.0, a[1] / a[0], a[2] / a[0]];
    let expected = [1.0, 1.0 / 2f64.sqrt(), 1.0 / 3f64.sqrt()];
    let diff = measured.iter().zip(expected).map(|(x, y)| (x - y).powi(2)).sum::<f64>().sqrt();
    let norm = expected.iter().map(|y| y * y).sum::<f64>().sqrt();
    assert!(diff / norm < 0.05, "relative deviation {}", diff / norm);
}

#[test]
fn weighted_sum_range_is_floor_of_half_minus_one() {
    for d in 2..100usize {
        assert_eq!(ell(d) as f64, (d as f64 / 2.0 - 1.0).floor());
    }
}
