//! Wavefunction backends against each other and against analytic limits.

use std::f64::consts::PI;

use backflow_core::observables::{current, density, prob_negative, prob_positive};
use backflow_core::propagator::{bm94_closed_form, evolve_quadrature, evolve_quadrature_with_gradient, Backend};
use backflow_core::{Complex64, Error, MomentumAmplitude, QuadratureSpec, Term, WaveEvaluator};
use proptest::prelude::*;

/// `ψ(x, 0) = (2π)^{-1/2} Σ c·n!/(b − ix)ⁿ⁺¹`.
fn initial_wave(state: &MomentumAmplitude, x: f64) -> Complex64 {
    let mut acc = Complex64::new(0.0, 0.0);
    for t in state.terms() {
        let fact: f64 = (1..=t.power).map(f64::from).product();
        acc += t.coeff * fact / Complex64::new(t.decay, -x).powu(t.power + 1);
    }
    acc / (2.0 * PI).sqrt()
}

fn term() -> impl Strategy<Value = Term> {
    (-2.0..2.0f64, -2.0..2.0f64, 0u32..4, 0.5..3.0f64)
        .prop_map(|(re, im, power, decay)| Term::new(Complex64::new(re, im), power, decay))
}

fn state() -> impl Strategy<Value = MomentumAmplitude> {
    prop::collection::vec(term(), 1..=3).prop_filter_map("zero state", |terms| {
        MomentumAmplitude::new(terms).ok()?.normalize().ok()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn quadrature_at_time_zero_is_fourier_transform(
        phi in state(),
        xs in prop::collection::vec(-8.0..8.0f64, 5),
    ) {
        let spec = QuadratureSpec::default();
        for x in xs {
            let got = evolve_quadrature(&phi, x, 0.0, &spec).unwrap();
            let want = initial_wave(&phi, x);
            prop_assert!((got - want).norm() < 1e-9, "x = {}: {} vs {}", x, got, want);
        }
    }

    #[test]
    fn hybrid_agrees_with_quadrature(
        phi in state(),
        points in prop::collection::vec((-60.0..60.0f64, 0.0..1.0f64), 6),
    ) {
        let spec = QuadratureSpec::default();
        let hybrid = WaveEvaluator::hybrid(phi.clone(), spec).unwrap();
        for (x, t) in points {
            // plain quadrature may run out of panels far out; skip those points
            let Ok((q, dq)) = evolve_quadrature_with_gradient(&phi, x, t, &spec) else { continue };
            let (h, dh) = hybrid.evaluate_with_gradient(x, t).unwrap();
            prop_assert!((h - q).norm() < 1e-9, "({}, {}): {} vs {}", x, t, h, q);
            prop_assert!((dh - dq).norm() < 1e-9, "({}, {}): {} vs {}", x, t, dh, dq);
        }
    }

    #[test]
    fn density_is_non_negative(x in -50.0..50.0f64, t in 0.0..5.0f64) {
        let rho = density(&WaveEvaluator::bm94(), x, t).unwrap();
        prop_assert!(rho >= 0.0 && rho.is_finite());
    }
}

#[test]
fn backends_agree_at_a_point() {
    let spec = QuadratureSpec::default();
    let quad = WaveEvaluator::quadrature(MomentumAmplitude::bm94(), spec).unwrap();
    let auto = WaveEvaluator::bm94();
    let a = quad.evaluate(0.5, 0.1).unwrap();
    let b = auto.evaluate(0.5, 0.1).unwrap();
    assert!((a - b).norm() < 1e-8);
    let q = evolve_quadrature(&MomentumAmplitude::bm94(), 3.0, 0.5, &spec).unwrap();
    assert!((q - bm94_closed_form(3.0, 0.5).unwrap()).norm() < 1e-8);
}

#[test]
fn auto_backend_dispatch() {
    let auto = WaveEvaluator::bm94();
    let series = WaveEvaluator::new(Backend::Bm94SmallTime { order: 6 }).unwrap();
    let closed = WaveEvaluator::new(Backend::Bm94ClosedForm).unwrap();
    assert_eq!(auto.evaluate(0.3, 0.0).unwrap(), series.evaluate(0.3, 0.0).unwrap());
    assert_eq!(auto.evaluate(0.3, 1.0).unwrap(), closed.evaluate(0.3, 1.0).unwrap());
    assert!(matches!(
        closed.evaluate(0.3, 0.0),
        Err(Error::SmallTimeInstability { .. })
    ));
}

#[test]
fn narrow_state_moves_at_its_momentum() {
    // pⁿe^{−bp} peaks at n/b; at x = t = 0 the ratio J/ρ is exactly (n + 1)/b
    let (n, b) = (200u32, 100.5);
    let phi = MomentumAmplitude::new(vec![Term::new(Complex64::new(1.0, 0.0), n, b)])
        .unwrap()
        .normalize()
        .unwrap();
    let w = WaveEvaluator::quadrature(phi, QuadratureSpec::default()).unwrap();
    let ratio = current(&w, 0.0, 0.0).unwrap() / density(&w, 0.0, 0.0).unwrap();
    assert!((ratio - (n + 1) as f64 / b).abs() < 1e-8, "{ratio}");
    assert!((ratio - 2.0).abs() < 1e-12);
}

#[test]
fn real_state_time_zero_is_current_sign_free() {
    // real ψ snapshot: J = Im(ψ*ψ') vanishes when both are real
    let psi = Complex64::new(0.3, 0.0);
    let dpsi = Complex64::new(-1.2, 0.0);
    assert_eq!((psi.conj() * dpsi).im, 0.0);
}

#[test]
fn real_coefficients_give_equal_initial_halves() {
    // φ real ⇒ ψ(−x, 0) = ψ(x, 0)* ⇒ even initial density. φ(0) = 0 keeps
    // the density tail at x⁻⁴; the spatial integral reaches |x| ~ 10³, where
    // the momentum integrand oscillates thousands of times, hence the looser
    // tolerances.
    let phi = MomentumAmplitude::new(vec![
        Term::new(Complex64::new(1.3, 0.0), 2, 0.8),
        Term::new(Complex64::new(-0.4, 0.0), 1, 2.5),
    ])
    .unwrap()
    .normalize()
    .unwrap();
    let spec = QuadratureSpec {
        max_subdivisions: 8000,
        ..QuadratureSpec::with_tolerances(1e-9, 1e-10)
    };
    let w = WaveEvaluator::quadrature(phi, spec).unwrap();
    let p1 = prob_negative(&w, 0.0, &spec).unwrap();
    let p0 = prob_positive(&w, 0.0, &spec).unwrap();
    assert!((p1 - p0).abs() < 1e-8, "{p1} vs {p0}");
    assert!((p1 + p0 - 1.0).abs() < 1e-8);
}

#[test]
fn density_tail_is_quartic() {
    let w = WaveEvaluator::bm94();
    for t in [0.021, 0.1, 1.0] {
        for sign in [-1.0, 1.0] {
            let r1 = density(&w, sign * 50.0, t).unwrap();
            let r2 = density(&w, sign * 500.0, t).unwrap();
            let slope = (r2.ln() - r1.ln()) / (500f64.ln() - 50f64.ln());
            assert!((slope + 4.0).abs() < 0.1, "t = {t}, sign {sign}: {slope}");
        }
    }
    // |ψ|² → 225/(70π x⁴)
    let x = 2000.0;
    let rho = density(&w, x, 0.0).unwrap();
    assert!((rho * x.powi(4) / (225.0 / (70.0 * PI)) - 1.0).abs() < 1e-2);
}
