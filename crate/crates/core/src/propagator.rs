//! Free evolution `ψ(x, t) = (2π)^{-1/2} ∫₀^∞ exp(−ip²t/2 + ixp)·φ(p) dp`.
//!
//! Any [`MomentumAmplitude`] can be evolved by quadrature. The reference
//! state additionally has a closed form in terms of `erfcx` and, near
//! `t = 0` where that form cancels catastrophically, an asymptotic series
//! in `t` whose first omitted term is checked.
//!
//! For a general state the same expansion,
//! `∫₀^∞ pⁿ e^{−βp − ip²t/2} dp = Σ_k (−it/2)ᵏ (n+2k)! / (k!·β^{n+2k+1})`
//! with `β = b − ix`, converges to rounding when `|β|²/t` is large. The
//! hybrid backend uses it there and falls back to quadrature elsewhere.

use alloc::vec::Vec;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::momentum::MomentumAmplitude;
use crate::numerics::{erfcx, integrate_with_breakpoints, QuadratureSpec, SQRT_PI};

pub const DEFAULT_SWITCH_TIME: f64 = 1e-3;
pub const DEFAULT_SERIES_ORDER: u32 = 6;

/// Below this time the closed form refuses to evaluate.
pub const CLOSED_FORM_MIN_TIME: f64 = 1e-6;

/// Largest first omitted series term that is accepted.
pub const SERIES_CERTIFICATION: f64 = 1e-10;

/// Series and closed form must agree this well at the switch time.
const SEAM_TOLERANCE: f64 = 1e-8;
const SEAM_POINTS: [f64; 7] = [-5.0, -1.0, -0.3, 0.0, 0.5, 1.0, 5.0];

const I: Complex64 = Complex64::new(0.0, 1.0);

/// `(s_j, b_j)` with `φ̃ ∝ Σ s_j·p·e^{−b_j p}`.
const BM94_TERMS: [(f64, f64); 2] = [(1.0, 1.0), (-1.0 / 6.0, 0.5)];

/// `(18/√35)/√(2π)`.
fn bm94_prefactor() -> f64 {
    18.0 / libm::sqrt(70.0 * core::f64::consts::PI)
}

fn check_time(t: f64) -> Result<()> {
    if t < 0.0 {
        Err(Error::NegativeTime { t })
    } else if t.is_nan() || t.is_infinite() {
        Err(Error::OutOfRange("time must be finite"))
    } else {
        Ok(())
    }
}

fn check_position(x: f64) -> Result<()> {
    if x.is_finite() {
        Ok(())
    } else {
        Err(Error::OutOfRange("position must be finite"))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Backend {
    Quadrature {
        state: MomentumAmplitude,
        spec: QuadratureSpec,
    },
    /// Large-`|β|` expansion where it converges to rounding, quadrature
    /// otherwise.
    Hybrid {
        state: MomentumAmplitude,
        spec: QuadratureSpec,
    },
    Bm94ClosedForm,
    Bm94SmallTime {
        order: u32,
    },
    /// Series below `switch_time`, closed form at and above it.
    Bm94Auto {
        switch_time: f64,
        order: u32,
    },
}

/// Evaluates `ψ(x, t)` and `∂ψ/∂x` through one [`Backend`].
#[derive(Debug, Clone, PartialEq)]
pub struct WaveEvaluator {
    backend: Backend,
}

impl WaveEvaluator {
    pub fn new(backend: Backend) -> Result<Self> {
        match &backend {
            Backend::Quadrature { spec, .. } | Backend::Hybrid { spec, .. } => spec.validate()?,
            Backend::Bm94ClosedForm | Backend::Bm94SmallTime { .. } => {}
            Backend::Bm94Auto { switch_time, order } => {
                if !(*switch_time >= CLOSED_FORM_MIN_TIME) || !switch_time.is_finite() {
                    return Err(Error::OutOfRange("switch time must be at least 1e-6"));
                }
                for x in SEAM_POINTS {
                    let s = bm94_small_time_series(x, *switch_time, *order)?;
                    let c = bm94_closed_form(x, *switch_time)?;
                    if (s - c).norm() > SEAM_TOLERANCE {
                        return Err(Error::CrossCheck {
                            what: "series and closed form disagree at the switch time",
                            a: s.norm(),
                            b: c.norm(),
                        });
                    }
                }
            }
        }
        Ok(Self { backend })
    }

    pub fn quadrature(state: MomentumAmplitude, spec: QuadratureSpec) -> Result<Self> {
        Self::new(Backend::Quadrature { state, spec })
    }

    pub fn hybrid(state: MomentumAmplitude, spec: QuadratureSpec) -> Result<Self> {
        Self::new(Backend::Hybrid { state, spec })
    }

    pub fn bm94_auto(switch_time: f64, order: u32) -> Result<Self> {
        Self::new(Backend::Bm94Auto { switch_time, order })
    }

    /// The reference state with the default switch time and series order.
    pub fn bm94() -> Self {
        Self {
            backend: Backend::Bm94Auto {
                switch_time: DEFAULT_SWITCH_TIME,
                order: DEFAULT_SERIES_ORDER,
            },
        }
    }

    pub fn backend(&self) -> &Backend {
        &self.backend
    }

    /// `q` such that `|ψ(x, t)|² = O(|x|^{−q})` as `|x| → ∞`. A term
    /// `c·pⁿ·e^{−bp}` contributes `c·n!/(b − ix)^{n+1}`, so the lowest power
    /// decides; cancellation between such terms only makes the decay faster.
    pub fn density_decay_power(&self) -> f64 {
        match &self.backend {
            Backend::Quadrature { state, .. } | Backend::Hybrid { state, .. } => {
                let n = state.terms().iter().map(|t| t.power).min().unwrap_or(0);
                2.0 * (n as f64 + 1.0)
            }
            Backend::Bm94ClosedForm | Backend::Bm94SmallTime { .. } | Backend::Bm94Auto { .. } => 4.0,
        }
    }

    /// Time at which the backend changes method, if it does.
    pub fn seam(&self) -> Option<f64> {
        match self.backend {
            Backend::Bm94Auto { switch_time, .. } => Some(switch_time),
            _ => None,
        }
    }

    pub fn evaluate(&self, x: f64, t: f64) -> Result<Complex64> {
        match &self.backend {
            Backend::Quadrature { state, spec } => evolve_quadrature(state, x, t, spec),
            Backend::Hybrid { state, spec } => match far_field(state, x, t, false)? {
                Some((psi, _)) => Ok(psi),
                None => evolve_quadrature(state, x, t, spec),
            },
            Backend::Bm94ClosedForm => bm94_closed_form(x, t),
            Backend::Bm94SmallTime { order } => bm94_small_time_series(x, t, *order),
            Backend::Bm94Auto { switch_time, order } => {
                if t < *switch_time {
                    bm94_small_time_series(x, t, *order)
                } else {
                    bm94_closed_form(x, t)
                }
            }
        }
    }

    /// `(ψ, ∂ψ/∂x)` at one point.
    pub fn evaluate_with_gradient(&self, x: f64, t: f64) -> Result<(Complex64, Complex64)> {
        match &self.backend {
            Backend::Quadrature { state, spec } => evolve_quadrature_with_gradient(state, x, t, spec),
            Backend::Hybrid { state, spec } => match far_field(state, x, t, true)? {
                Some(v) => Ok(v),
                None => evolve_quadrature_with_gradient(state, x, t, spec),
            },
            Backend::Bm94ClosedForm => bm94_closed_form_with_gradient(x, t),
            Backend::Bm94SmallTime { order } => bm94_small_time_series_with_gradient(x, t, *order),
            Backend::Bm94Auto { switch_time, order } => {
                if t < *switch_time {
                    bm94_small_time_series_with_gradient(x, t, *order)
                } else {
                    bm94_closed_form_with_gradient(x, t)
                }
            }
        }
    }
}

/// Panel edges on `[0, L]` such that the phase `xp − p²t/2` turns by at most
/// `MAX_PHASE_PER_PANEL` on each, capped at a quarter of the subdivision
/// budget.
fn phase_breakpoints(x: f64, t: f64, cutoff: f64, spec: &QuadratureSpec) -> Vec<f64> {
    let phase = |p: f64| x * p - 0.5 * p * p * t;
    // the phase is monotone on each side of its stationary point x/t
    let mut total = (phase(cutoff) - phase(0.0)).abs();
    if t > 0.0 && x / t > 0.0 && x / t < cutoff {
        let ps = x / t;
        total = (phase(ps) - phase(0.0)).abs() + (phase(cutoff) - phase(ps)).abs();
    }
    let max_panels = (spec.max_subdivisions / 4).max(1);
    let panels = (libm::ceil(total / MAX_PHASE_PER_PANEL) as usize).clamp(1, max_panels);
    // uniform in the phase's dominant variable: p for the linear part, p² for the quadratic
    let mut edges = Vec::with_capacity(panels + 1);
    for k in 0..=panels {
        let s = k as f64 / panels as f64;
        let linear = s * cutoff;
        let quadratic = libm::sqrt(s) * cutoff;
        let wq = 0.5 * t * cutoff * cutoff;
        let wl = x.abs() * cutoff;
        edges.push(if wq + wl > 0.0 {
            (wl * linear + wq * quadratic) / (wl + wq)
        } else {
            linear
        });
    }
    edges.dedup();
    edges
}

const MAX_PHASE_PER_PANEL: f64 = 4.0 * core::f64::consts::PI;

/// `∫₀^L pᵏ φ(p) e^{iθ(p)} dp / √(2π)` with `L` chosen from the envelope.
fn momentum_integral(
    state: &MomentumAmplitude,
    x: f64,
    t: f64,
    extra_power: u32,
    spec: &QuadratureSpec,
) -> Result<Complex64> {
    let norm = libm::sqrt(2.0 * core::f64::consts::PI);
    let cutoff = state.envelope_cutoff(spec.abs_tol * norm / 10.0, extra_power);
    let integrand = |p: f64| {
        let phase = x * p - 0.5 * p * p * t;
        let weight = if extra_power == 0 {
            1.0
        } else {
            libm::pow(p, extra_power as f64)
        };
        state.evaluate(p) * Complex64::new(libm::cos(phase), libm::sin(phase)) * weight
    };
    let edges = phase_breakpoints(x, t, cutoff, spec);
    let re = integrate_with_breakpoints(|p| integrand(p).re, &edges, spec)?.value;
    let im = integrate_with_breakpoints(|p| integrand(p).im, &edges, spec)?.value;
    Ok(Complex64::new(re, im) / norm)
}

/// `ψ(x, t)` for an arbitrary state by adaptive quadrature in momentum.
pub fn evolve_quadrature(state: &MomentumAmplitude, x: f64, t: f64, spec: &QuadratureSpec) -> Result<Complex64> {
    check_time(t)?;
    check_position(x)?;
    momentum_integral(state, x, t, 0, spec)
}

/// `(ψ, ∂ψ/∂x)`, the derivative being `∫ ip·φ·e^{iθ}`.
pub fn evolve_quadrature_with_gradient(
    state: &MomentumAmplitude,
    x: f64,
    t: f64,
    spec: &QuadratureSpec,
) -> Result<(Complex64, Complex64)> {
    check_time(t)?;
    check_position(x)?;
    let psi = momentum_integral(state, x, t, 0, spec)?;
    let dpsi = I * momentum_integral(state, x, t, 1, spec)?;
    Ok((psi, dpsi))
}

const FAR_FIELD_MAX_TERMS: u32 = 64;

/// The neglected saddle term must sit this far below rounding.
const SADDLE_MARGIN: f64 = 1e-3;

/// `(ψ, ∂ψ/∂x)` from the large-`|β|` expansion, or `None` unless every
/// series reaches a term below `ε·|partial sum|` before its terms start
/// growing. The gradient is left at zero unless requested.
///
/// The expansion only captures the `p = 0` endpoint. For `x > 0` the
/// stationary point `p_s = (x + ib)/t` adds a term of size about
/// `|c|·|p_s|ⁿ·e^{−bx/t}/√t`, so the expansion is also refused unless that
/// is negligible.
pub fn far_field(state: &MomentumAmplitude, x: f64, t: f64, gradient: bool) -> Result<Option<(Complex64, Complex64)>> {
    check_time(t)?;
    check_position(x)?;
    let half_it = Complex64::new(0.0, -0.5 * t);
    let mut psi = Complex64::new(0.0, 0.0);
    let mut dpsi = Complex64::new(0.0, 0.0);
    for term in state.terms() {
        let beta = Complex64::new(term.decay, -x);
        let inv_beta = 1.0 / beta;
        let inv_beta2 = inv_beta * inv_beta;
        let n = term.power as f64;
        // c·n!/β^{n+1}, built up without forming n!
        let mut a = term.coeff * inv_beta;
        for i in 1..=term.power {
            a *= i as f64 * inv_beta;
        }
        let mut sum = Complex64::new(0.0, 0.0);
        let mut gsum = Complex64::new(0.0, 0.0);
        let mut converged = false;
        for k in 0..FAR_FIELD_MAX_TERMS {
            let m = n + 2.0 * k as f64;
            // ∂/∂x β^{−(m+1)} = i(m+1)·β^{−(m+2)}
            let g = a * I * (m + 1.0) * inv_beta;
            sum += a;
            gsum += g;
            let next = a * half_it * ((m + 1.0) * (m + 2.0) / (k as f64 + 1.0)) * inv_beta2;
            let next_g = next * I * (m + 3.0) * inv_beta;
            let small =
                next.norm() <= f64::EPSILON * sum.norm() && (!gradient || next_g.norm() <= f64::EPSILON * gsum.norm());
            if small {
                converged = true;
                break;
            }
            if next.norm() > a.norm() || (gradient && next_g.norm() > g.norm()) {
                break;
            }
            a = next;
        }
        if !converged {
            return Ok(None);
        }
        if x > 0.0 && t > 0.0 {
            let ps = Complex64::new(x, term.decay).norm() / t;
            let mut saddle = term.coeff.norm() * libm::exp(-term.decay * x / t) / libm::sqrt(t);
            for _ in 0..term.power {
                saddle *= ps;
            }
            let limit = SADDLE_MARGIN * f64::EPSILON;
            if !(saddle <= limit * sum.norm()) || (gradient && !(saddle * ps <= limit * gsum.norm())) {
                return Ok(None);
            }
        }
        psi += sum;
        dpsi += gsum;
    }
    let norm = libm::sqrt(2.0 * core::f64::consts::PI);
    Ok(Some((
        psi / norm,
        if gradient {
            dpsi / norm
        } else {
            Complex64::new(0.0, 0.0)
        },
    )))
}

/// Closed form of the reference state, valid for `t ≥ 1e-6`.
///
/// With `β = b − ix`, `w = (1+i)√t/2` and `u = β/(2w)` each term is
/// `∫₀^∞ p·e^{−βp − ip²t/2} dp = (1 − √π·u·erfcx(u))/(it)`.
pub fn bm94_closed_form(x: f64, t: f64) -> Result<Complex64> {
    closed_form(x, t, false).map(|(v, _)| v)
}

pub fn bm94_closed_form_with_gradient(x: f64, t: f64) -> Result<(Complex64, Complex64)> {
    closed_form(x, t, true)
}

fn closed_form(x: f64, t: f64, gradient: bool) -> Result<(Complex64, Complex64)> {
    check_time(t)?;
    check_position(x)?;
    if t < CLOSED_FORM_MIN_TIME {
        return Err(Error::SmallTimeInstability { t });
    }
    let sqrt_t = libm::sqrt(t);
    let w = Complex64::new(0.5 * sqrt_t, 0.5 * sqrt_t);
    let mut psi = Complex64::new(0.0, 0.0);
    let mut dpsi = Complex64::new(0.0, 0.0);
    for (s, b) in BM94_TERMS {
        let u = Complex64::new(b - x, -(b + x)) / (2.0 * sqrt_t);
        let e = erfcx(u)?;
        psi += s * (1.0 - SQRT_PI * u * e);
        if gradient {
            // du/dx = −i/(2w)
            let dg = 2.0 * u - SQRT_PI * (1.0 + 2.0 * u * u) * e;
            dpsi += s * (-I / (2.0 * w)) * dg;
        }
    }
    let scale = bm94_prefactor() / (I * t);
    Ok((psi * scale, dpsi * scale))
}

/// Small-time series of the reference state through `order` powers of `t`:
///
/// `ψ = C Σ_j s_j Σ_{k=1}^{order+1} (2k−1)!!·(−it)^{k−1} / β_j^{2k}`.
///
/// Fails with [`Error::DivergentTruncation`] when the first omitted term is
/// not below `1e-10`.
pub fn bm94_small_time_series(x: f64, t: f64, order: u32) -> Result<Complex64> {
    series(x, t, order, false).map(|(v, _)| v)
}

/// Value and gradient from the series. Only the value's truncation is
/// certified; the gradient's omitted term is larger by roughly `2k/|β|`.
pub fn bm94_small_time_series_with_gradient(x: f64, t: f64, order: u32) -> Result<(Complex64, Complex64)> {
    series(x, t, order, true)
}

fn series(x: f64, t: f64, order: u32, gradient: bool) -> Result<(Complex64, Complex64)> {
    check_time(t)?;
    check_position(x)?;
    let c = bm94_prefactor();
    let minus_it = Complex64::new(0.0, -t);
    let mut psi = Complex64::new(0.0, 0.0);
    let mut dpsi = Complex64::new(0.0, 0.0);
    let mut omitted = 0.0;
    for (s, b) in BM94_TERMS {
        let beta = Complex64::new(b, -x);
        let inv_beta = 1.0 / beta;
        let inv_beta2 = inv_beta * inv_beta;
        // (2k−1)!!·(−it)^{k−1}·β^{−2k}, starting at k = 1
        let mut term = inv_beta2;
        for k in 1..=order + 1 {
            psi += s * term;
            if gradient {
                dpsi += s * term * (2.0 * k as f64) * I * inv_beta;
            }
            term *= minus_it * (2.0 * k as f64 + 1.0) * inv_beta2;
        }
        omitted += s.abs() * term.norm();
    }
    let bound = c * omitted;
    if !(bound < SERIES_CERTIFICATION) {
        return Err(Error::DivergentTruncation { bound });
    }
    Ok((psi * c, dpsi * c))
}
