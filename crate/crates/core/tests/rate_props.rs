use mec_core::oracle::{coupling_oracle_theta, FrechetInterval};
use mec_core::{binary_entropy, mutual_information, saturation_rate, solve_mecbr, RateProblem};
use proptest::prelude::*;

fn canonical() -> impl Strategy<Value = f64> {
    0.01..=0.5f64
}

fn solve(q_x: f64, q_y: f64, r: f64) -> f64 {
    solve_mecbr(&RateProblem::new(q_x, q_y, r).unwrap()).value
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn nondecreasing_in_rate(q_x in canonical(), q_y in canonical()) {
        let mut prev = solve(q_x, q_y, 0.0);
        prop_assert_eq!(prev, 0.0);
        for i in 1..100 {
            let v = solve(q_x, q_y, i as f64 / 99.0);
            prop_assert!(v >= prev - 1e-12, "drop at step {i}: {prev} -> {v}");
            prev = v;
        }
    }

    #[test]
    fn returned_mixture_is_consistent(q_x in canonical(), q_y in canonical(), r in 0.0..1.2f64) {
        let res = solve_mecbr(&RateProblem::new(q_x, q_y, r).unwrap());
        let m = res.mixture;
        let via_joint = mutual_information(&m.joint(q_x).unwrap());
        prop_assert!((via_joint - res.value).abs() <= 1e-10);
        prop_assert!((m.induced_q_y(q_x) - q_y).abs() <= 1e-10);
        prop_assert!(m.rate(q_x) <= r + 1e-10);
        prop_assert!(m.weights().iter().all(|&w| w >= 0.0));
    }

    #[test]
    fn saturated_value_matches_endpoint_coupling(q_x in canonical(), q_y in canonical(), extra in 0.0..1.0f64) {
        let r = saturation_rate(q_x, q_y) + extra;
        let upper = FrechetInterval::new(q_x, q_y).unwrap().upper;
        let endpoint = mec_core::oracle::coupling_information(q_x, q_y, upper).unwrap();
        prop_assert!((solve(q_x, q_y, r) - endpoint).abs() <= 1e-10);
    }
}

#[test]
fn saturation_matches_theta_grid() {
    for &(q_x, q_y) in &[(0.2, 0.3), (0.3, 0.2), (0.1, 0.45), (0.5, 0.5)] {
        let (_, grid_value) = coupling_oracle_theta(q_x, q_y, 100_001).unwrap();
        let v = solve(q_x, q_y, saturation_rate(q_x, q_y));
        assert!(
            (v - grid_value).abs() <= 1e-10,
            "{q_x} {q_y}: {v} vs {grid_value}"
        );
    }
}

#[test]
fn fig3_plateau_formula() {
    let plateau = binary_entropy(0.3_f64).unwrap() - 0.8 * binary_entropy(0.125_f64).unwrap();
    assert!((solve(0.2, 0.3, 1.0) - plateau).abs() < 1e-12);
}
