//! Invariant checks behind `backflow validate`.
//!
//! Every check runs with the configured tolerances. A numerical error inside
//! a group fails that group and is reported verbatim.

use std::f64::consts::PI;

use backflow_core::manybody::{prob_j_of_n, prob_partition_direct};
use backflow_core::numerics::{erfc, integrate_adaptive};
use backflow_core::observables::{
    continuity_residual, current, delta1, delta1_via_current, prob_negative, prob_positive, total_probability,
};
use backflow_core::propagator::{bm94_closed_form, bm94_small_time_series, evolve_quadrature};
use backflow_core::{build_report, Complex64, MomentumAmplitude, QuadratureSpec, TailPolicy, WaveEvaluator};
use serde_json::json;

use crate::args::Format;
use crate::config::{RunConfig, StateSource};
use crate::error::CliError;

/// Agreement required between two routes to the same probability.
const PROBABILITY_AGREEMENT: f64 = 1e-8;
/// Agreement required between two backends, relative to `max|ψ|`.
const BACKEND_AGREEMENT: f64 = 1e-8;
/// Bound on the continuity residual at `h = 1e-4`.
const CONTINUITY_BOUND: f64 = 1e-5;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Pass,
    Fail,
    Skip,
}

impl Status {
    fn label(self) -> &'static str {
        match self {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Skip => "SKIP",
        }
    }
}

#[derive(Debug, Clone)]
pub struct Check {
    pub name: String,
    pub ok: bool,
    pub detail: String,
}

#[derive(Debug, Clone)]
pub struct GroupResult {
    pub name: &'static str,
    pub status: Status,
    pub checks: Vec<Check>,
    /// Set when the group stopped on an error or was skipped.
    pub note: Option<String>,
}

type Checks = backflow_core::Result<Vec<Check>>;

fn within(name: impl Into<String>, got: f64, want: f64, tol: f64) -> Check {
    let diff = (got - want).abs();
    Check {
        name: name.into(),
        ok: diff <= tol,
        detail: format!("got {got:.12e}, want {want:.12e}, |diff| {diff:.2e} <= {tol:.0e}"),
    }
}

fn holds(name: impl Into<String>, ok: bool, detail: String) -> Check {
    Check {
        name: name.into(),
        ok,
        detail,
    }
}

fn run(name: &'static str, body: impl FnOnce() -> Checks) -> GroupResult {
    match body() {
        Ok(checks) => GroupResult {
            name,
            status: if checks.iter().all(|c| c.ok) {
                Status::Pass
            } else {
                Status::Fail
            },
            checks,
            note: None,
        },
        Err(e) => GroupResult {
            name,
            status: Status::Fail,
            checks: Vec::new(),
            note: Some(e.to_string()),
        },
    }
}

fn skipped(name: &'static str, why: &str) -> GroupResult {
    GroupResult {
        name,
        status: Status::Skip,
        checks: Vec::new(),
        note: Some(why.to_string()),
    }
}

fn quadrature_group(spec: &QuadratureSpec) -> Checks {
    let tol = 10.0 * spec.abs_tol.max(spec.rel_tol);
    let a = integrate_adaptive(|p| p * (-p).exp(), 0.0, f64::INFINITY, spec)?;
    let b = integrate_adaptive(|p| p.powi(4) * (-2.0 * p).exp(), 0.0, f64::INFINITY, spec)?;
    let c = integrate_adaptive(|x| x.sin(), 0.0, PI, spec)?;
    Ok(vec![
        within("int p e^-p", a.value, 1.0, tol),
        within("int p^4 e^-2p", b.value, 0.75, tol),
        within("int_0^pi sin", c.value, 2.0, tol),
    ])
}

fn special_functions_group() -> Checks {
    let mut checks = vec![within(
        "erfc(1)",
        erfc(Complex64::new(1.0, 0.0))?.re,
        0.157_299_207_050_285_13,
        1e-15,
    )];
    for z in [
        Complex64::new(0.3, 0.7),
        Complex64::new(2.5, -1.5),
        Complex64::new(-4.0, 3.0),
    ] {
        let sum = erfc(z)? + erfc(-z)?;
        checks.push(within(
            format!("erfc reflection at {z}"),
            (sum - 2.0).norm(),
            0.0,
            1e-13,
        ));
        let conj = (erfc(z.conj())? - erfc(z)?.conj()).norm();
        checks.push(within(format!("erfc conjugation at {z}"), conj, 0.0, 1e-15));
    }
    Ok(checks)
}

fn norm_group(state: &MomentumAmplitude, spec: &QuadratureSpec) -> Checks {
    let rate = state
        .terms()
        .iter()
        .map(|t| 2.0 * t.decay)
        .fold(f64::INFINITY, f64::min);
    let tail_spec = spec.with_tail(TailPolicy::Exponential { rate }, 32.0 / rate.min(1.0));
    let numeric = integrate_adaptive(|p| state.evaluate(p).norm_sqr(), 0.0, f64::INFINITY, &tail_spec)?;
    Ok(vec![
        within("closed-form norm", state.norm_squared(), 1.0, 1e-12),
        within(
            "quadrature norm",
            numeric.value,
            state.norm_squared(),
            PROBABILITY_AGREEMENT,
        ),
    ])
}

/// `ψ(x, 0) = Σ c·n!/(√(2π)·(b − ix)^(n+1))`.
fn initial_wave(state: &MomentumAmplitude, x: f64) -> Complex64 {
    state
        .terms()
        .iter()
        .map(|term| {
            let fact: f64 = (1..=term.power).map(f64::from).product();
            term.coeff * fact / ((2.0 * PI).sqrt() * Complex64::new(term.decay, -x).powu(term.power + 1))
        })
        .sum()
}

fn propagator_group(w: &WaveEvaluator, state: &MomentumAmplitude, builtin: bool, spec: &QuadratureSpec) -> Checks {
    let mut checks = Vec::new();
    for x in [-3.0, -0.5, 0.0, 1.0, 4.0] {
        let got = w.evaluate(x, 0.0)?;
        let want = initial_wave(state, x);
        checks.push(within(
            format!("psi(x={x}, 0) against its transform"),
            (got - want).norm(),
            0.0,
            1e-9,
        ));
    }
    if builtin {
        let mut worst: f64 = 0.0;
        let mut scale: f64 = 0.0;
        for (x, t) in [(-2.0, 0.01), (0.0, 0.1), (0.5, 0.021), (3.0, 0.5), (-1.0, 1.0)] {
            let closed = bm94_closed_form(x, t)?;
            let quad = evolve_quadrature(state, x, t, spec)?;
            worst = worst.max((closed - quad).norm());
            scale = scale.max(closed.norm());
        }
        checks.push(within(
            "closed form against quadrature",
            worst / scale,
            0.0,
            BACKEND_AGREEMENT,
        ));
        let mut seam: f64 = 0.0;
        for x in [-2.0, 0.0, 2.0] {
            seam = seam.max((bm94_small_time_series(x, 1e-4, 6)? - bm94_closed_form(x, 1e-4)?).norm());
        }
        checks.push(within("series against closed form at t=1e-4", seam, 0.0, 1e-9));
    }
    Ok(checks)
}

fn observables_group(w: &WaveEvaluator, spec: &QuadratureSpec, norm: f64) -> Checks {
    let mut checks = Vec::new();
    for t in [0.0, 0.02, 0.1, 0.5] {
        let total = total_probability(w, t, spec)?;
        checks.push(within(
            format!("unitarity at t={t}"),
            total.value,
            norm,
            PROBABILITY_AGREEMENT,
        ));
    }
    let a = delta1(w, 0.02, spec)?;
    let b = delta1_via_current(w, 0.02, spec)?;
    checks.push(within(
        "delta1 from P1 and from the current",
        a,
        b,
        PROBABILITY_AGREEMENT,
    ));
    for (x, t) in [(0.0, 0.05), (0.5, 0.1), (-1.0, 0.3)] {
        let r = continuity_residual(w, x, t, 1e-4)?;
        checks.push(holds(
            format!("continuity at x={x}, t={t}"),
            r <= CONTINUITY_BOUND,
            format!("residual {r:.2e} <= {CONTINUITY_BOUND:.0e}"),
        ));
    }
    Ok(checks)
}

fn manybody_group(w: &WaveEvaluator, spec: &QuadratureSpec) -> Checks {
    let t = 0.02;
    let p1 = prob_negative(w, t, spec)?;
    let p0 = prob_positive(w, t, spec)?;
    let mut checks = Vec::new();
    for n in [2, 3] {
        let mut sum = 0.0;
        for j in 0..=n {
            let closed = prob_j_of_n(p1, p0, n, j)?;
            let direct = prob_partition_direct(w, n, j, t, spec)?;
            checks.push(within(
                format!("P_{j} of {n} against direct product"),
                closed,
                direct,
                1e-12,
            ));
            sum += closed;
        }
        checks.push(within(format!("sum of P_j of {n}"), sum, 1.0, PROBABILITY_AGREEMENT));
    }
    Ok(checks)
}

fn backflow_group(w: &WaveEvaluator, builtin: bool, spec: &QuadratureSpec) -> Checks {
    let report = build_report(w, 20, spec)?;
    let mut checks = vec![holds(
        "delta1 below the supremum",
        report.delta1_max <= backflow_core::BRACKEN_MELLOY,
        format!("{:.7} <= {}", report.delta1_max, backflow_core::BRACKEN_MELLOY),
    )];
    if builtin {
        checks.push(within("t1", report.t1_prime, 0.021, 1e-3));
        checks.push(within("delta1", report.delta1_max, 0.0043, 3e-4));
    }
    let bad: Vec<u32> = report.rows.iter().filter(|r| !r.inequality_ok).map(|r| r.n).collect();
    checks.push(holds(
        "bounds hold for N=1..20",
        bad.is_empty(),
        if bad.is_empty() {
            "all rows".to_string()
        } else {
            format!("violated at N={bad:?}")
        },
    ));
    Ok(checks)
}

pub fn run_all(config: &RunConfig) -> Result<Vec<GroupResult>, CliError> {
    let state = config.load_state()?;
    let w = config.evaluator()?;
    let spec = &config.spec;
    let builtin = config.state == StateSource::Builtin;
    let mut groups = vec![
        run("quadrature", || quadrature_group(spec)),
        run("special functions", special_functions_group),
        run("state", || norm_group(&state, spec)),
        run("propagator", || propagator_group(&w, &state, builtin, spec)),
        run("observables", || observables_group(&w, spec, state.norm_squared())),
        run("manybody", || manybody_group(&w, spec)),
    ];
    let backflows = current(&w, 0.0, 0.0).map(|j| j < 0.0);
    groups.push(match backflows {
        Ok(false) => skipped("backflow", "no initial backflow: J(0, 0) >= 0"),
        _ => run("backflow", || backflow_group(&w, builtin, spec)),
    });
    Ok(groups)
}

pub fn failures(groups: &[GroupResult]) -> usize {
    groups.iter().filter(|g| g.status == Status::Fail).count()
}

pub fn render(groups: &[GroupResult], format: Format) -> String {
    match format {
        Format::Csv => {
            let mut out = String::new();
            for g in groups {
                out.push_str(&format!("{} {}", g.status.label(), g.name));
                if let Some(note) = &g.note {
                    out.push_str(&format!(": {note}"));
                }
                out.push('\n');
                for c in &g.checks {
                    let mark = if c.ok { "ok  " } else { "FAIL" };
                    out.push_str(&format!("    {mark} {}: {}\n", c.name, c.detail));
                }
            }
            out
        }
        Format::Json => {
            let doc = json!({
                "passed": failures(groups) == 0,
                "groups": groups.iter().map(|g| json!({
                    "name": g.name,
                    "status": g.status.label(),
                    "note": g.note,
                    "checks": g.checks.iter().map(|c| json!({
                        "name": c.name,
                        "ok": c.ok,
                        "detail": c.detail,
                    })).collect::<Vec<_>>(),
                })).collect::<Vec<_>>(),
            });
            let mut s = serde_json::to_string_pretty(&doc).expect("json of plain values");
            s.push('\n');
            s
        }
    }
}
