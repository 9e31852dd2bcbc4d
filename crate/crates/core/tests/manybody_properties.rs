//! Algebraic identities of the N-boson product state.

use backflow_core::manybody::{
    bound_a_n, bound_b_n, delta_n, delta_n_cofactor, prob_all_positive, prob_at_least_one_negative, prob_j_of_n,
    prob_partition_direct, BRACKEN_MELLOY,
};
use backflow_core::observables::{prob_negative, prob_positive};
use backflow_core::{QuadratureSpec, WaveEvaluator};
use proptest::prelude::*;

proptest! {
    #[test]
    fn binomial_completeness(p1 in 0.0..=1.0f64, n in 1u32..=30) {
        let p0 = 1.0 - p1;
        let total: f64 = (0..=n).map(|j| prob_j_of_n(p1, p0, n, j).unwrap()).sum();
        prop_assert!((total - 1.0).abs() <= 1e-12);
        prop_assert_eq!(prob_j_of_n(p1, p0, n, 0).unwrap(), prob_all_positive(p0, n));
        let negative: f64 = (1..=n).map(|j| prob_j_of_n(p1, p0, n, j).unwrap()).sum();
        prop_assert!((negative - prob_at_least_one_negative(p0, n)).abs() <= 1e-12);
    }

    #[test]
    fn cofactor_identity(a in 0.0..=1.0f64, b in 0.0..=1.0f64, n in 1u32..=60) {
        let lhs = delta_n(a, b, n);
        let rhs = delta_n_cofactor(a, b, n) * (a - b);
        prop_assert!((lhs - rhs).abs() <= 1e-12, "{} vs {}", lhs, rhs);
    }

    #[test]
    fn backflow_equivalence(a in 0.01..=1.0f64, frac in 1e-6..=1.0f64, n in 1u32..=50) {
        let b = a * (1.0 - frac);
        prop_assert!(delta_n(a, b, n) > 0.0);
        prop_assert!(delta_n(b, a, n) < 0.0);
        prop_assert_eq!(delta_n(a, a, n), 0.0);
    }

    #[test]
    fn sandwich_holds_below_the_supremum(p0 in 0.05..0.999f64, d in 1e-6..BRACKEN_MELLOY, n in 2u32..=40) {
        prop_assume!(p0 - d > 0.0);
        let dn = delta_n(p0, p0 - d, n);
        prop_assert!(bound_b_n(p0, n, BRACKEN_MELLOY) * d <= dn);
        prop_assert!(dn < bound_a_n(p0, n).unwrap() * d);
    }
}

#[test]
fn a_n_eventually_vanishes() {
    for p0 in [0.5, 0.9, 0.99] {
        let values: Vec<f64> = (1..=6000).map(|n| bound_a_n(p0, n).unwrap()).collect();
        // a_{N+1}/a_N = (N+1)p0/N < 1 once N > p0/(1 − p0)
        let turn = (p0 / (1.0 - p0)).ceil() as usize + 1;
        assert!(values[turn..].windows(2).all(|w| w[1] <= w[0]), "p0 = {p0}");
        let first_tiny = values.iter().position(|&a| a < 1e-12).expect("never below 1e-12");
        assert!(values[first_tiny..].iter().all(|&a| a < 1e-12 && a.is_finite()));
    }
}

#[test]
fn partition_oracle_matches_binomial() {
    let w = WaveEvaluator::bm94();
    let spec = QuadratureSpec::default();
    for t in [0.0, 0.021] {
        let p1 = prob_negative(&w, t, &spec).unwrap();
        let p0 = prob_positive(&w, t, &spec).unwrap();
        for n in 2..=4 {
            let mut total = 0.0;
            for j in 0..=n {
                let direct = prob_partition_direct(&w, n, j, t, &spec).unwrap();
                assert!((direct - prob_j_of_n(p1, p0, n, j).unwrap()).abs() < 1e-6);
                total += direct;
            }
            assert!((total - 1.0).abs() < 1e-8);
        }
    }
}
