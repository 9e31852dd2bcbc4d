//! N identical bosons in the product state `Π ψ(x_k, t)`.
//!
//! Everything reduces to the one-particle half-line probabilities: with
//! `p₁ = P₁⁽¹⁾` and `p₀ = P₀⁽¹⁾` the number of particles on the negative
//! half-line is binomially distributed.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::numerics::{binomial, QuadratureSpec};
use crate::observables::{half_line_probability, HalfLine, ProbabilitySeries, SUM_TOLERANCE};
use crate::propagator::WaveEvaluator;

/// Supremum of the single-particle backflow over all positive-momentum
/// states, to seven digits.
pub const BRACKEN_MELLOY: f64 = 0.038_451_7;

/// Largest `N` accepted by [`prob_partition_direct`].
pub const DIRECT_ORACLE_MAX_N: u32 = 6;

/// Up to this exponent powers are multiplied out; above it `exp(N·ln p)`.
const POWI_LIMIT: u32 = 64;

fn power(p: f64, n: u32) -> f64 {
    if n <= POWI_LIMIT {
        // binary powering; exact for n = 0, 1
        let (mut base, mut e, mut acc) = (p, n, 1.0);
        while e > 0 {
            if e & 1 == 1 {
                acc *= base;
            }
            base *= base;
            e >>= 1;
        }
        return acc;
    }
    if p == 0.0 {
        return 0.0;
    }
    let ln = n as f64 * libm::log(p.abs());
    let magnitude = if ln < -745.2 { 0.0 } else { libm::exp(ln) };
    if p < 0.0 && n % 2 == 1 {
        -magnitude
    } else {
        magnitude
    }
}

fn binomial_f64(n: u32, j: u32) -> f64 {
    match binomial(n as u64, j as u64) {
        Ok(c) => c as f64,
        Err(_) => {
            libm::exp(libm::lgamma(n as f64 + 1.0) - libm::lgamma(j as f64 + 1.0) - libm::lgamma((n - j) as f64 + 1.0))
        }
    }
}

fn check_probability(p: f64) -> Result<()> {
    if (0.0..=1.0).contains(&p) {
        Ok(())
    } else {
        Err(Error::OutOfRange("probability must lie in [0, 1]"))
    }
}

/// `C(N, j)·p₁ʲ·p₀^(N−j)`: exactly `j` of `N` particles on the negative
/// half-line.
pub fn prob_j_of_n(p1: f64, p0: f64, n: u32, j: u32) -> Result<f64> {
    check_probability(p1)?;
    check_probability(p0)?;
    if (p1 + p0 - 1.0).abs() > SUM_TOLERANCE {
        return Err(Error::OutOfRange("p1 + p0 must equal 1"));
    }
    if j > n {
        return Err(Error::OutOfRange("j must not exceed N"));
    }
    Ok(binomial_f64(n, j) * power(p1, j) * power(p0, n - j))
}

/// `p₀ᴺ`: all particles on the positive half-line. Underflows to exactly 0.
pub fn prob_all_positive(p0: f64, n: u32) -> f64 {
    power(p0, n)
}

/// `1 − p₀ᴺ`.
pub fn prob_at_least_one_negative(p0: f64, n: u32) -> f64 {
    1.0 - prob_all_positive(p0, n)
}

/// `Δ_N = P₀(0)ᴺ − P₀(T)ᴺ`.
pub fn delta_n(p0_start: f64, p0_end: f64, n: u32) -> f64 {
    prob_all_positive(p0_start, n) - prob_all_positive(p0_end, n)
}

/// `Σ_{k=0}^{N−1} P₀(0)ᵏ·P₀(T)^(N−1−k)`, so that `Δ_N = cofactor·Δ₁`.
pub fn delta_n_cofactor(p0_start: f64, p0_end: f64, n: u32) -> f64 {
    geometric_cofactor(p0_start, p0_end, n)
}

fn geometric_cofactor(a: f64, b: f64, n: u32) -> f64 {
    (0..n).map(|k| power(a, k) * power(b, n - 1 - k)).sum()
}

/// `a_N = N·P₀(0)^(N−1)`, evaluated as `exp(ln N + (N−1)·ln P₀(0))`.
pub fn bound_a_n(p0_start: f64, n: u32) -> Result<f64> {
    if n == 0 {
        return Err(Error::OutOfRange("N must be at least 1"));
    }
    if p0_start == 0.0 {
        return Err(Error::ZeroProbability);
    }
    if !(p0_start > 0.0 && p0_start <= 1.0) {
        return Err(Error::OutOfRange("P0(0) must lie in (0, 1]"));
    }
    let ln = libm::log(n as f64) + (n as f64 - 1.0) * libm::log(p0_start);
    Ok(if ln < -745.2 { 0.0 } else { libm::exp(ln) })
}

/// `b_N = Σ_{k=0}^{N−1} P₀(0)ᵏ·(P₀(0) − Δ₁,max)^(N−1−k)`; negative when
/// `P₀(0) < Δ₁,max` and `N` is even.
pub fn bound_b_n(p0_start: f64, n: u32, delta1_max: f64) -> f64 {
    geometric_cofactor(p0_start, p0_start - delta1_max, n)
}

/// `dP₋⁽ᴺ⁾/dt = N·p₀^(N−1)·dP₁⁽¹⁾/dt`.
pub fn dp_minus_dt(p0: f64, dp1_dt: f64, n: u32) -> f64 {
    if n == 0 {
        return 0.0;
    }
    n as f64 * power(p0, n - 1) * dp1_dt
}

/// One `N` of the sandwich `b_N·Δ₁ ≤ Δ_N < a_N·Δ₁`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundsRow {
    pub n: u32,
    pub delta_n_max: f64,
    pub a_n: f64,
    pub b_n: f64,
    /// `b_N·Δ₁`
    pub lower: f64,
    /// `a_N·Δ₁`
    pub upper: f64,
    /// For `N = 1` both bounds equal `Δ₁` and the strict upper inequality
    /// is relaxed to `≤`.
    pub inequality_ok: bool,
}

/// Sandwich row for a backflowing state, with `a_N` and `b_N` evaluated at
/// `p0_bounds` (normally `p0_start` itself).
pub fn sandwich_row(p0_bounds: f64, p0_start: f64, p0_end: f64, n: u32, delta1_max: f64) -> Result<BoundsRow> {
    check_probability(p0_start)?;
    check_probability(p0_end)?;
    if n == 0 {
        return Err(Error::OutOfRange("N must be at least 1"));
    }
    if p0_start >= 1.0 || p0_bounds >= 1.0 {
        return Err(Error::OutOfRange("P0(0) must be below 1"));
    }
    if p0_end >= p0_start {
        return Err(Error::NotBackflow { p0_start, p0_end });
    }
    let delta1 = p0_start - p0_end;
    let d = delta_n(p0_start, p0_end, n);
    let a_n = bound_a_n(p0_bounds, n)?;
    let b_n = bound_b_n(p0_bounds, n, delta1_max);
    let lower = b_n * delta1;
    let upper = a_n * delta1;
    let inequality_ok = if n == 1 {
        lower <= d && d <= upper
    } else {
        lower <= d && d < upper
    };
    Ok(BoundsRow {
        n,
        delta_n_max: d,
        a_n,
        b_n,
        lower,
        upper,
        inequality_ok,
    })
}

pub fn check_sandwich(p0_start: f64, p0_end: f64, n: u32) -> Result<BoundsRow> {
    sandwich_row(p0_start, p0_start, p0_end, n, BRACKEN_MELLOY)
}

/// `P_j⁽ᴺ⁾` by summing, over every choice of `j` particles, the product of
/// per-particle half-line integrals. Exponential in `N`, hence capped at 6.
pub fn prob_partition_direct(w: &WaveEvaluator, n: u32, j: u32, t: f64, spec: &QuadratureSpec) -> Result<f64> {
    if n > DIRECT_ORACLE_MAX_N {
        return Err(Error::TooLarge {
            n: n as usize,
            max: DIRECT_ORACLE_MAX_N as usize,
        });
    }
    if j > n {
        return Err(Error::OutOfRange("j must not exceed N"));
    }
    let mut neg = Vec::with_capacity(n as usize);
    let mut pos = Vec::with_capacity(n as usize);
    for _ in 0..n {
        neg.push(half_line_probability(w, t, HalfLine::Negative, spec)?.value);
        pos.push(half_line_probability(w, t, HalfLine::Positive, spec)?.value);
    }
    let mut total = 0.0;
    for mask in 0u32..(1 << n) {
        if mask.count_ones() != j {
            continue;
        }
        let mut term = 1.0;
        for k in 0..n as usize {
            term *= if mask & (1 << k) != 0 { neg[k] } else { pos[k] };
        }
        total += term;
    }
    Ok(total)
}

/// `N` bosons sharing one single-particle [`ProbabilitySeries`].
#[derive(Debug, Clone, PartialEq)]
pub struct BosonEnsemble {
    n_particles: u32,
    base: ProbabilitySeries,
}

impl BosonEnsemble {
    pub fn new(n_particles: u32, base: ProbabilitySeries) -> Result<Self> {
        if n_particles == 0 {
            return Err(Error::OutOfRange("N must be at least 1"));
        }
        Ok(Self { n_particles, base })
    }

    pub fn n_particles(&self) -> u32 {
        self.n_particles
    }

    pub fn base(&self) -> &ProbabilitySeries {
        &self.base
    }

    /// `P₋⁽ᴺ⁾` on the grid.
    pub fn prob_minus(&self) -> Vec<f64> {
        self.base
            .p0()
            .iter()
            .map(|&p0| prob_at_least_one_negative(p0, self.n_particles))
            .collect()
    }

    /// `P_j⁽ᴺ⁾` on the grid.
    pub fn prob_j(&self, j: u32) -> Result<Vec<f64>> {
        self.base
            .p1()
            .iter()
            .zip(self.base.p0())
            .map(|(&p1, &p0)| prob_j_of_n(p1, p0, self.n_particles, j))
            .collect()
    }

    /// Grid index of the largest `P₋⁽ᴺ⁾`; the first one on ties.
    pub fn argmax_prob_minus(&self) -> usize {
        let pm = self.prob_minus();
        let mut best = 0;
        for i in 1..pm.len() {
            if pm[i] > pm[best] {
                best = i;
            }
        }
        best
    }
}
