//! Locating the end of the initial backflow window and tabulating `Δ_N,max`
//! with its bounds.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::manybody::{prob_at_least_one_negative, sandwich_row, BoundsRow, BRACKEN_MELLOY};
use crate::numerics::{try_find_max_unimodal, try_find_root_bracketed, QuadratureSpec};
use crate::observables::{current, prob_negative, prob_positive};
use crate::propagator::WaveEvaluator;

/// Default upper end of the search for `t'₁`.
pub const DEFAULT_T_HI: f64 = 0.1;

/// Cells used to bracket the first sign change of `J(0, t)`.
pub const SCAN_POINTS: usize = 64;

pub const ROOT_TOL: f64 = 1e-12;
const ARGMAX_TOL: f64 = 1e-7;

/// Root and argmax must agree this well.
pub const LOCATOR_AGREEMENT: f64 = 1e-4;

/// Both estimates of `t'₁`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct T1Location {
    /// First zero of `J(0, t)`.
    pub root: f64,
    /// Maximizer of `P₁(t)` around the root.
    pub argmax: f64,
}

/// Finds `t'₁` as the first zero of `J(0, t)` on `(0, t_hi)` and confirms it
/// by maximizing `P₁`.
pub fn locate_t1(w: &WaveEvaluator, t_hi: f64, spec: &QuadratureSpec) -> Result<T1Location> {
    if !(t_hi > 0.0) || !t_hi.is_finite() {
        return Err(Error::OutOfRange("t_hi must be positive and finite"));
    }
    let j = |t: f64| current(w, 0.0, t);
    let grid: Vec<f64> = (0..=SCAN_POINTS)
        .map(|k| t_hi * k as f64 / SCAN_POINTS as f64)
        .collect();
    let j_start = j(0.0)?;
    if j_start >= 0.0 {
        return Err(Error::NoBracket {
            lo: 0.0,
            hi: t_hi,
            g_lo: j_start,
            g_hi: j(t_hi)?,
        });
    }
    let mut cell = None;
    for (k, &t) in grid.iter().enumerate().skip(1) {
        if j(t)? >= 0.0 {
            cell = Some(k);
            break;
        }
    }
    let Some(k) = cell else {
        return Err(Error::NoBracket {
            lo: 0.0,
            hi: t_hi,
            g_lo: j_start,
            g_hi: j(t_hi)?,
        });
    };
    let root = try_find_root_bracketed(j, grid[k - 1], grid[k], ROOT_TOL)?;

    let lo = grid[k.saturating_sub(2)];
    let hi = grid[(k + 1).min(SCAN_POINTS)];
    let (argmax, _) = try_find_max_unimodal(|t| prob_negative(w, t, spec), lo, hi, ARGMAX_TOL)?;
    if (root - argmax).abs() > LOCATOR_AGREEMENT {
        return Err(Error::CrossCheck {
            what: "zero of the current and maximum of P1 disagree",
            a: root,
            b: argmax,
        });
    }
    Ok(T1Location { root, argmax })
}

/// `t'₁`, the end of the initial backflow window.
pub fn find_t1(w: &WaveEvaluator, t_hi: f64, spec: &QuadratureSpec) -> Result<f64> {
    Ok(locate_t1(w, t_hi, spec)?.root)
}

/// `Δ_N,max = P₋⁽ᴺ⁾(t'₁) − P₋⁽ᴺ⁾(0)`.
pub fn delta_n_max(w: &WaveEvaluator, n: u32, t1: f64, spec: &QuadratureSpec) -> Result<f64> {
    if n == 0 {
        return Err(Error::OutOfRange("N must be at least 1"));
    }
    let p0_start = prob_positive(w, 0.0, spec)?;
    let p0_end = prob_positive(w, t1, spec)?;
    Ok(prob_at_least_one_negative(p0_end, n) - prob_at_least_one_negative(p0_start, n))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReportMeta {
    pub t_hi: f64,
    pub scan_points: usize,
    pub root_tol: f64,
    pub spec: QuadratureSpec,
    /// Initial positive-side probability assumed by the bounds.
    pub p0_bounds: f64,
    pub delta1_bound: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BackflowReport {
    pub t1_prime: f64,
    pub t1_argmax: f64,
    pub p0_start: f64,
    pub p0_end: f64,
    /// `P₀(0) − P₀(t'₁)`
    pub delta1_max: f64,
    /// One row per `N = 1..=n_max`, in order.
    pub rows: Vec<BoundsRow>,
    pub meta: ReportMeta,
}

/// Locates `t'₁`, then tabulates `Δ_N,max` and the bounds with `P₀(0) = 1/2`
/// for `N = 1..=n_max`.
pub fn build_report(w: &WaveEvaluator, n_max: u32, spec: &QuadratureSpec) -> Result<BackflowReport> {
    if n_max == 0 {
        return Err(Error::OutOfRange("n_max must be at least 1"));
    }
    let t1 = locate_t1(w, DEFAULT_T_HI, spec)?;
    let p0_start = prob_positive(w, 0.0, spec)?;
    let p0_end = prob_positive(w, t1.root, spec)?;
    let rows = (1..=n_max)
        .map(|n| sandwich_row(0.5, p0_start, p0_end, n, BRACKEN_MELLOY))
        .collect::<Result<Vec<_>>>()?;
    Ok(BackflowReport {
        t1_prime: t1.root,
        t1_argmax: t1.argmax,
        p0_start,
        p0_end,
        delta1_max: p0_start - p0_end,
        rows,
        meta: ReportMeta {
            t_hi: DEFAULT_T_HI,
            scan_points: SCAN_POINTS,
            root_tol: ROOT_TOL,
            spec: *spec,
            p0_bounds: 0.5,
            delta1_bound: BRACKEN_MELLOY,
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::momentum::{MomentumAmplitude, Term};
    use num_complex::Complex64;

    #[test]
    fn reference_backflow_window() {
        let w = WaveEvaluator::bm94();
        let loc = locate_t1(&w, DEFAULT_T_HI, &QuadratureSpec::default()).unwrap();
        assert!((loc.root - 0.021_309).abs() < 1e-5, "{loc:?}");
        assert!((loc.root - loc.argmax).abs() < 1e-5);
    }

    #[test]
    fn no_initial_backflow_is_reported() {
        // e^{−p} alone: J(0, 0) > 0
        let state = MomentumAmplitude::new(alloc::vec![Term::new(Complex64::new(1.0, 0.0), 1, 1.0)])
            .unwrap()
            .normalize()
            .unwrap();
        let w = WaveEvaluator::quadrature(state, QuadratureSpec::default()).unwrap();
        let err = find_t1(&w, 0.05, &QuadratureSpec::default()).unwrap_err();
        assert!(matches!(err, Error::NoBracket { .. }));
    }

    #[test]
    fn report_rows() {
        let w = WaveEvaluator::bm94();
        let spec = QuadratureSpec::default();
        let r = build_report(&w, 20, &spec).unwrap();
        assert_eq!(r.rows.len(), 20);
        assert!(r.rows.iter().all(|row| row.inequality_ok));
        assert!(r.rows.windows(2).all(|p| p[0].n + 1 == p[1].n));
        let first = r.rows[0];
        assert_eq!(first.lower, r.delta1_max);
        assert_eq!(first.upper, r.delta1_max);
        for row in &r.rows {
            let direct = delta_n_max(&w, row.n, r.t1_prime, &spec).unwrap();
            assert!((direct - row.delta_n_max).abs() < 1e-12);
        }
    }
}
