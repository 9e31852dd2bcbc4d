//! Adaptive quadrature against closed-form Gamma integrals.

use backflow_core::numerics::{integrate_adaptive, QuadratureSpec, TailPolicy};
use backflow_core::{Complex64, MomentumAmplitude, Term};
use proptest::prelude::*;

fn factorial(n: u32) -> f64 {
    (1..=n).map(f64::from).product()
}

#[test]
fn gamma_integrals() {
    // ∫₀^∞ pⁿ e^{−bp} dp = n!/bⁿ⁺¹
    let spec = QuadratureSpec::default();
    for &(n, b) in &[(0u32, 1.0f64), (1, 1.0), (2, 2.0), (5, 0.5), (3, 1.5)] {
        let want = factorial(n) / b.powi(n as i32 + 1);
        let spec = spec.with_tail(TailPolicy::Exponential { rate: b / 2.0 }, 4.0 * (n + 1) as f64 / b);
        let got = integrate_adaptive(|p| p.powi(n as i32) * (-b * p).exp(), 0.0, f64::INFINITY, &spec).unwrap();
        assert!(
            (got.value - want).abs() <= 1e-10 * want,
            "n = {n}, b = {b}: {got:?} vs {want}"
        );
    }
}

#[test]
fn reference_norm_pieces() {
    // ∫ p² e^{−3p/2} dp = 2/(3/2)³ = 16/27 and ∫ p² e^{−p} dp = 2
    let spec = QuadratureSpec::default();
    let cross = integrate_adaptive(|p| p * p * (-1.5 * p).exp(), 0.0, f64::INFINITY, &spec).unwrap();
    assert!((cross.value - 16.0 / 27.0).abs() < 1e-11);
    let wide = integrate_adaptive(|p| p * p * (-p).exp(), 0.0, f64::INFINITY, &spec).unwrap();
    assert!((wide.value - 2.0).abs() < 1e-10);
    // ∫ p²(e^{−p} − e^{−p/2}/6)² dp = 1/4 − 16/81 + 2/36 = 35/324
    let bare = integrate_adaptive(
        |p| p * p * ((-p).exp() - (-p / 2.0).exp() / 6.0).powi(2),
        0.0,
        f64::INFINITY,
        &spec,
    )
    .unwrap();
    assert!((bare.value - 35.0 / 324.0).abs() < 1e-12, "{bare:?}");
    let c2 = 324.0 / 35.0;
    let phi2 = |p: f64| c2 * p * p * ((-p).exp() - (-p / 2.0).exp() / 6.0).powi(2);
    let norm = integrate_adaptive(phi2, 0.0, f64::INFINITY, &spec).unwrap();
    assert!((norm.value - 1.0).abs() < 1e-10, "{norm:?}");
}

fn term() -> impl Strategy<Value = Term> {
    (-3.0..3.0f64, -3.0..3.0f64, 0u32..5, 0.3..4.0f64)
        .prop_map(|(re, im, power, decay)| Term::new(Complex64::new(re, im), power, decay))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn single_term_integral(c in -3.0..3.0f64, n in 0u32..7, b in 0.3..5.0f64) {
        let want = c * factorial(n) / b.powi(n as i32 + 1);
        let spec = QuadratureSpec::default()
            .with_tail(TailPolicy::Exponential { rate: b / 2.0 }, 4.0 * (n + 1) as f64 / b);
        let got = integrate_adaptive(|p| c * p.powi(n as i32) * (-b * p).exp(), 0.0, f64::INFINITY, &spec).unwrap();
        prop_assert!((got.value - want).abs() <= 1e-9 * want.abs().max(1e-3));
    }

    #[test]
    fn closed_form_norm_matches_quadrature(terms in prop::collection::vec(term(), 1..=4)) {
        let state = MomentumAmplitude::new(terms).unwrap();
        let closed = state.norm_squared();
        prop_assume!(closed > 1e-6);
        let b_min = state.terms().iter().map(|t| t.decay).fold(f64::INFINITY, f64::min);
        let n_max = state.terms().iter().map(|t| t.power).max().unwrap();
        let spec = QuadratureSpec::with_tolerances(1e-12, 1e-14)
            .with_tail(TailPolicy::Exponential { rate: b_min }, 8.0 * (n_max + 1) as f64 / b_min);
        let quad = integrate_adaptive(|p| state.evaluate(p).norm_sqr(), 0.0, f64::INFINITY, &spec).unwrap();
        prop_assert!((quad.value - closed).abs() <= 1e-10 * closed, "{} vs {}", quad.value, closed);
        let unit = state.normalize().unwrap();
        prop_assert!((unit.norm_squared() - 1.0).abs() < 1e-12);
    }
}
