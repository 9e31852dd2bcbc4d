//! Density, current, half-line probabilities and the single-particle
//! backflow `Δ₁`.
//!
//! `P₁(t) = ∫_{x<0} |ψ|²` and `P₀(t) = ∫_{x>0} |ψ|²`. The point `x = 0` has
//! zero measure, so both are integrals over open half-lines.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::numerics::{try_integrate_adaptive, try_integrate_with_breakpoints, Estimate, QuadratureSpec, TailPolicy};
use crate::propagator::WaveEvaluator;

/// Length of the first spatial window; beyond it `|ψ|²` is bounded by the
/// state's algebraic decay.
pub const X_CUT: f64 = 500.0;

/// Window doublings allowed for the spatial tail. An `x⁻²` density needs
/// about 35 to bring the tail below `1e-13`.
pub const SPATIAL_MAX_DOUBLINGS: u32 = 48;

/// Tolerance on `p1 + p0 = 1` inside a [`ProbabilitySeries`].
pub const SUM_TOLERANCE: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HalfLine {
    Negative,
    Positive,
}

pub fn density(w: &WaveEvaluator, x: f64, t: f64) -> Result<f64> {
    Ok(w.evaluate(x, t)?.norm_sqr())
}

/// `J = Im(ψ*·∂ψ/∂x)`.
pub fn current(w: &WaveEvaluator, x: f64, t: f64) -> Result<f64> {
    let (psi, dpsi) = w.evaluate_with_gradient(x, t)?;
    Ok((psi.conj() * dpsi).im)
}

/// The caller's tolerances with the spatial tail model of `w`.
pub fn spatial_spec(w: &WaveEvaluator, spec: &QuadratureSpec) -> QuadratureSpec {
    QuadratureSpec {
        max_doublings: spec.max_doublings.max(SPATIAL_MAX_DOUBLINGS),
        ..spec.with_tail(
            TailPolicy::Algebraic {
                power: w.density_decay_power(),
            },
            X_CUT,
        )
    }
}

/// `∫|ψ(x, t)|²` over one half-line, with the tail bound folded into the
/// error.
pub fn half_line_probability(w: &WaveEvaluator, t: f64, side: HalfLine, spec: &QuadratureSpec) -> Result<Estimate> {
    if t < 0.0 {
        return Err(Error::NegativeTime { t });
    }
    let sign = match side {
        HalfLine::Negative => -1.0,
        HalfLine::Positive => 1.0,
    };
    try_integrate_adaptive(|y| density(w, sign * y, t), 0.0, f64::INFINITY, &spatial_spec(w, spec))
}

/// `P₁(t)`, the probability of the negative half-line.
pub fn prob_negative(w: &WaveEvaluator, t: f64, spec: &QuadratureSpec) -> Result<f64> {
    Ok(half_line_probability(w, t, HalfLine::Negative, spec)?.value)
}

/// `P₀(t)`, the probability of the positive half-line.
pub fn prob_positive(w: &WaveEvaluator, t: f64, spec: &QuadratureSpec) -> Result<f64> {
    Ok(half_line_probability(w, t, HalfLine::Positive, spec)?.value)
}

/// `∫|ψ|²` over the whole line.
pub fn total_probability(w: &WaveEvaluator, t: f64, spec: &QuadratureSpec) -> Result<Estimate> {
    let neg = half_line_probability(w, t, HalfLine::Negative, spec)?;
    let pos = half_line_probability(w, t, HalfLine::Positive, spec)?;
    Ok(Estimate {
        value: neg.value + pos.value,
        error: neg.error + pos.error,
    })
}

/// `Δ₁ = P₁(T) − P₁(0)`.
pub fn delta1(w: &WaveEvaluator, t_end: f64, spec: &QuadratureSpec) -> Result<f64> {
    if t_end < 0.0 {
        return Err(Error::NegativeTime { t: t_end });
    }
    Ok(prob_negative(w, t_end, spec)? - prob_negative(w, 0.0, spec)?)
}

/// `Δ₁ = −∫₀ᵀ J(0, t) dt`.
pub fn delta1_via_current(w: &WaveEvaluator, t_end: f64, spec: &QuadratureSpec) -> Result<f64> {
    if t_end < 0.0 {
        return Err(Error::NegativeTime { t: t_end });
    }
    if t_end == 0.0 {
        return Ok(0.0);
    }
    let mut points = alloc::vec![0.0];
    if let Some(seam) = w.seam() {
        if seam > 0.0 && seam < t_end {
            points.push(seam);
        }
    }
    points.push(t_end);
    let r = try_integrate_with_breakpoints(|t| current(w, 0.0, t), &points, spec)?;
    Ok(-r.value)
}

/// `|∂ρ/∂t + ∂J/∂x|` from central differences with step `h` in both
/// variables.
pub fn continuity_residual(w: &WaveEvaluator, x: f64, t: f64, h: f64) -> Result<f64> {
    if !(h > 0.0) {
        return Err(Error::OutOfRange("finite-difference step must be positive"));
    }
    if t < h {
        return Err(Error::OutOfRange("continuity residual needs t >= h"));
    }
    let drho_dt = (density(w, x, t + h)? - density(w, x, t - h)?) / (2.0 * h);
    let dj_dx = (current(w, x + h, t)? - current(w, x - h, t)?) / (2.0 * h);
    Ok((drho_dt + dj_dx).abs())
}

/// Half-line probabilities and the current at the origin over a time grid.
#[derive(Debug, Clone, PartialEq)]
pub struct ProbabilitySeries {
    times: Vec<f64>,
    p1: Vec<f64>,
    p0: Vec<f64>,
    j0: Vec<f64>,
}

impl ProbabilitySeries {
    pub fn new(times: Vec<f64>, p1: Vec<f64>, p0: Vec<f64>, j0: Vec<f64>) -> Result<Self> {
        let n = times.len();
        if n == 0 || p1.len() != n || p0.len() != n || j0.len() != n {
            return Err(Error::InvariantViolation(
                "series columns must be non-empty and equally long",
            ));
        }
        check_grid(&times)?;
        for i in 0..n {
            for p in [p1[i], p0[i]] {
                if !(0.0..=1.0 + 1e-12).contains(&p) {
                    return Err(Error::InvariantViolation("probability outside [0, 1]"));
                }
            }
            if (p1[i] + p0[i] - 1.0).abs() > SUM_TOLERANCE {
                return Err(Error::InvariantViolation("p1 + p0 differs from 1"));
            }
            if !j0[i].is_finite() {
                return Err(Error::InvariantViolation("current must be finite"));
            }
        }
        Ok(Self { times, p1, p0, j0 })
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn p1(&self) -> &[f64] {
        &self.p1
    }

    pub fn p0(&self) -> &[f64] {
        &self.p0
    }

    pub fn j0(&self) -> &[f64] {
        &self.j0
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    /// Grid index of the largest `P₁`; the first one on ties.
    pub fn argmax_p1(&self) -> usize {
        let mut best = 0;
        for i in 1..self.p1.len() {
            if self.p1[i] > self.p1[best] {
                best = i;
            }
        }
        best
    }
}

fn check_grid(times: &[f64]) -> Result<()> {
    if times.iter().any(|t| !t.is_finite() || *t < 0.0) {
        return Err(Error::InvariantViolation("times must be finite and non-negative"));
    }
    if times.windows(2).any(|w| !(w[0] < w[1])) {
        return Err(Error::InvariantViolation("times must be strictly ascending"));
    }
    Ok(())
}

pub fn build_series(w: &WaveEvaluator, grid: &[f64], spec: &QuadratureSpec) -> Result<ProbabilitySeries> {
    if grid.is_empty() {
        return Err(Error::OutOfRange("time grid is empty"));
    }
    check_grid(grid)?;
    let mut p1 = Vec::with_capacity(grid.len());
    let mut p0 = Vec::with_capacity(grid.len());
    let mut j0 = Vec::with_capacity(grid.len());
    for &t in grid {
        p1.push(prob_negative(w, t, spec)?);
        p0.push(prob_positive(w, t, spec)?);
        j0.push(current(w, 0.0, t)?);
    }
    ProbabilitySeries::new(grid.to_vec(), p1, p0, j0)
}
