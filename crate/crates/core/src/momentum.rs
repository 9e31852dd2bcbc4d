//! Positive-momentum initial amplitudes `φ(p) = Σ c·pⁿ·exp(−b·p)` for
//! `p > 0`, zero for `p < 0`.

use alloc::vec::Vec;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::numerics::cabs;

/// One `c·pⁿ·exp(−b·p)` contribution.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Term {
    pub coeff: Complex64,
    pub power: u32,
    /// Decay rate `b`, in units of `1/α`. Must be positive.
    pub decay: f64,
}

impl Term {
    pub fn new(coeff: Complex64, power: u32, decay: f64) -> Self {
        Self { coeff, power, decay }
    }

    /// `pⁿ·exp(−b·p)` for `p ≥ 0`, computed in log space so large powers
    /// do not overflow.
    fn shape(&self, p: f64) -> f64 {
        if self.power == 0 {
            libm::exp(-self.decay * p)
        } else if p == 0.0 {
            0.0
        } else {
            libm::exp(self.power as f64 * libm::log(p) - self.decay * p)
        }
    }
}

/// `n! / bⁿ⁺¹ = ∫₀^∞ pⁿ e^{−bp} dp`.
pub(crate) fn gamma_moment(n: u32, b: f64) -> f64 {
    if n <= 20 {
        let fact: f64 = (1..=n).map(|k| k as f64).product();
        let v = fact / libm::pow(b, n as f64 + 1.0);
        if v.is_finite() && v > 0.0 {
            return v;
        }
    }
    libm::exp(libm::lgamma(n as f64 + 1.0) - (n as f64 + 1.0) * libm::log(b))
}

/// `∫_L^∞ pᵐ e^{−bp} dp = e^{−bL} Σ_{i=0}^{m} m!/i! · Lⁱ / b^{m−i+1}`.
fn upper_gamma_moment(m: u32, b: f64, cutoff: f64) -> f64 {
    let ln_l = libm::log(cutoff);
    let ln_b = libm::log(b);
    let ln_mfact = libm::lgamma(m as f64 + 1.0);
    (0..=m)
        .map(|i| {
            let i_f = i as f64;
            libm::exp(-b * cutoff + ln_mfact - libm::lgamma(i_f + 1.0) + i_f * ln_l - (m as f64 - i_f + 1.0) * ln_b)
        })
        .sum()
}

/// A momentum-space wavefunction supported on `p > 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct MomentumAmplitude {
    terms: Vec<Term>,
}

impl MomentumAmplitude {
    pub fn new(terms: Vec<Term>) -> Result<Self> {
        if terms.is_empty() {
            return Err(Error::InvalidState("at least one term is required"));
        }
        for t in &terms {
            if !(t.decay > 0.0) || !t.decay.is_finite() {
                return Err(Error::InvalidState("every decay rate must be positive and finite"));
            }
            if !t.coeff.re.is_finite() || !t.coeff.im.is_finite() {
                return Err(Error::InvalidState("coefficients must be finite"));
            }
        }
        Ok(Self { terms })
    }

    /// `φ̃(p) = (18/√35)·p·(e^{−p} − e^{−p/2}/6)`, the reference backflow
    /// state, already normalized.
    pub fn bm94() -> Self {
        let c = 18.0 / libm::sqrt(35.0);
        Self {
            terms: alloc::vec![
                Term::new(Complex64::new(c, 0.0), 1, 1.0),
                Term::new(Complex64::new(-c / 6.0, 0.0), 1, 0.5),
            ],
        }
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn evaluate(&self, p: f64) -> Complex64 {
        if p < 0.0 {
            return Complex64::new(0.0, 0.0);
        }
        self.terms.iter().map(|t| t.coeff * t.shape(p)).sum()
    }

    /// `∫₀^∞ |φ|² dp` in closed form.
    pub fn norm_squared(&self) -> f64 {
        let mut acc = 0.0;
        for a in &self.terms {
            for b in &self.terms {
                let c = a.coeff * b.coeff.conj();
                acc += c.re * gamma_moment(a.power + b.power, a.decay + b.decay);
            }
        }
        acc
    }

    pub fn scaled(&self, factor: Complex64) -> Self {
        Self {
            terms: self
                .terms
                .iter()
                .map(|t| Term {
                    coeff: t.coeff * factor,
                    ..*t
                })
                .collect(),
        }
    }

    pub fn normalize(&self) -> Result<Self> {
        let n2 = self.norm_squared();
        if !(n2 > 0.0) || !n2.is_finite() {
            return Err(Error::ZeroState);
        }
        Ok(self.scaled(Complex64::new(1.0 / libm::sqrt(n2), 0.0)))
    }

    /// Upper bound on `∫_L^∞ pᵏ |φ(p)| dp`, `k = extra_power`.
    pub fn envelope_tail(&self, cutoff: f64, extra_power: u32) -> f64 {
        self.terms
            .iter()
            .map(|t| cabs(t.coeff) * upper_gamma_moment(t.power + extra_power, t.decay, cutoff))
            .sum()
    }

    /// A momentum cutoff `L` with `envelope_tail(L, extra_power) ≤ tol`.
    pub fn envelope_cutoff(&self, tol: f64, extra_power: u32) -> f64 {
        let mut cutoff = self
            .terms
            .iter()
            .map(|t| (t.power + extra_power + 1) as f64 / t.decay)
            .fold(0.0, f64::max);
        for _ in 0..64 {
            if self.envelope_tail(cutoff, extra_power) <= tol {
                break;
            }
            cutoff *= 1.25;
        }
        cutoff
    }
}
