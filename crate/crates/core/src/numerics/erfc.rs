//! Complex complementary error function.
//!
//! The work is done by the Faddeeva function `w(z) = exp(−z²)·erfc(−iz)`,
//! evaluated in the upper half-plane by one of three schemes depending on
//! `ρ² = (x/6.3)² + (y/4.4)²`:
//!
//! * `ρ² < 0.085264`: Maclaurin series of `erf`,
//! * `ρ² > 1`: Laplace continued fraction,
//! * otherwise: truncated Taylor expansion about `z + ih` whose derivatives
//!   come from the continued fraction (Gautschi's scheme).
//!
//! The lower half-plane follows from `w(z) = 2·exp(−z²) − w(−z)`. The
//! scaled function `erfcx(z) = exp(z²)·erfc(z) = w(iz)` is what the
//! closed-form wavefunction needs, since it never overflows for `Re z ≥ 0`.

use num_complex::Complex64;

use super::{cabs, cexp, cln, is_finite, FRAC_2_SQRT_PI, MAX_EXP_ARG, SQRT_PI};
use crate::error::{Error, Result};

const I: Complex64 = Complex64::new(0.0, 1.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);
const TWO: Complex64 = Complex64::new(2.0, 0.0);

/// `w(z)` for `x ≥ 0`, `y ≥ 0`.
fn faddeeva_first_quadrant(x: f64, y: f64) -> Complex64 {
    let z = Complex64::new(x, y);
    let xs = x / 6.3;
    let ys = y / 4.4;
    let rho2 = xs * xs + ys * ys;

    if rho2 < 0.085_264 {
        let n = libm::round(6.0 + 72.0 * (1.0 - 0.85 * ys) * libm::sqrt(rho2)) as u32;
        let z2 = z * z;
        let mut sum = Complex64::new(1.0 / (2 * n + 1) as f64, 0.0);
        for k in (1..=n).rev() {
            sum = sum * z2 / k as f64 + 1.0 / (2 * k - 1) as f64;
        }
        return cexp(-z2) * (ONE + I * FRAC_2_SQRT_PI * sum * z);
    }

    let (h, kapn, nu) = if rho2 > 1.0 {
        let rho = libm::sqrt(rho2);
        (0.0, 0, libm::floor(3.0 + 1442.0 / (26.0 * rho + 77.0)) as i32)
    } else {
        let q = (1.0 - ys) * libm::sqrt(1.0 - rho2);
        (
            1.88 * q,
            libm::round(7.0 + 34.0 * q) as i32,
            libm::round(16.0 + 26.0 * q) as i32,
        )
    };

    let shift = Complex64::new(h, 0.0) - I * z;
    let two_h = 2.0 * h;
    let mut lambda = if h > 0.0 { libm::pow(two_h, kapn as f64) } else { 0.0 };
    let mut r = Complex64::new(0.0, 0.0);
    let mut s = Complex64::new(0.0, 0.0);
    for n in (0..=nu).rev() {
        r = 0.5 / (shift + (n + 1) as f64 * r);
        if h > 0.0 && n <= kapn {
            s = r * (lambda + s);
            lambda /= two_h;
        }
    }
    let mut w = FRAC_2_SQRT_PI * if h > 0.0 { s } else { r };
    if y == 0.0 {
        w.re = libm::exp(-x * x);
    }
    w
}

/// Faddeeva function `w(z) = exp(−z²)·erfc(−iz)`.
///
/// Fails with [`Error::Overflow`] in the lower half-plane where
/// `exp(−z²)` leaves the floating-point range.
pub fn faddeeva(z: Complex64) -> Result<Complex64> {
    if !is_finite(z) {
        return Err(Error::OutOfRange("faddeeva argument must be finite"));
    }
    if z.im >= 0.0 {
        let w = faddeeva_first_quadrant(z.re.abs(), z.im);
        return Ok(if z.re < 0.0 { w.conj() } else { w });
    }
    let neg_z2 = -(z * z);
    if neg_z2.re > MAX_EXP_ARG - 1.0 {
        return Err(Error::Overflow);
    }
    let w = TWO * cexp(neg_z2) - faddeeva(-z)?;
    if is_finite(w) {
        Ok(w)
    } else {
        Err(Error::Overflow)
    }
}

/// Scaled complementary error function `exp(z²)·erfc(z)`.
pub fn erfcx(z: Complex64) -> Result<Complex64> {
    faddeeva(I * z)
}

/// Complex complementary error function.
pub fn erfc(z: Complex64) -> Result<Complex64> {
    if !is_finite(z) {
        return Err(Error::OutOfRange("erfc argument must be finite"));
    }
    if z.re < 0.0 {
        return Ok(TWO - erfc(-z)?);
    }
    let scaled = erfcx(z)?;
    let exponent = -(z * z);
    let v = if exponent.re < MAX_EXP_ARG - 10.0 {
        cexp(exponent) * scaled
    } else {
        cexp(exponent + cln(scaled))
    };
    if is_finite(v) {
        Ok(v)
    } else {
        Err(Error::Overflow)
    }
}

/// Partial sum of the large-`|z|` expansion
/// `erfc(z) ~ exp(−z²)/(√π z) · Σ_k (−1)^k (2k−1)!!/(2z²)^k`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AsymptoticErfc {
    pub value: Complex64,
    /// Magnitude of the first omitted term, prefactor included.
    pub truncation_bound: f64,
    /// Index of the smallest term of the divergent series.
    pub minimal_term: u32,
    /// Set when the sum runs past the smallest term; the value is still
    /// returned but is no longer the best the series can do.
    pub past_minimal_term: bool,
}

impl AsymptoticErfc {
    /// Converts the divergence flag into [`Error::DivergentTruncation`].
    pub fn certified(self) -> Result<Self> {
        if self.past_minimal_term {
            Err(Error::DivergentTruncation {
                bound: self.truncation_bound,
            })
        } else {
            Ok(self)
        }
    }
}

/// Smallest `k` with `|term_{k+1}| ≥ |term_k|`, i.e. `2k + 1 ≥ 2|z|²`.
fn minimal_term_index(z: Complex64) -> u32 {
    let r2 = z.norm_sqr();
    let k = libm::ceil((2.0 * r2 - 1.0) / 2.0);
    if k <= 0.0 {
        0
    } else if k >= u32::MAX as f64 {
        u32::MAX
    } else {
        k as u32
    }
}

/// Asymptotic expansion of `erfc(z)` summed through `k_max`.
///
/// For `Re z < 0` the reflection `erfc(z) = 2 − erfc(−z)` is applied.
pub fn erfc_asymptotic(z: Complex64, k_max: u32) -> Result<AsymptoticErfc> {
    if !is_finite(z) || z == Complex64::new(0.0, 0.0) {
        return Err(Error::OutOfRange("asymptotic erfc needs finite non-zero z"));
    }
    if z.re < 0.0 {
        let r = erfc_asymptotic(-z, k_max)?;
        return Ok(AsymptoticErfc {
            value: TWO - r.value,
            ..r
        });
    }
    let prefactor = cexp(-(z * z)) / (SQRT_PI * z);
    if !is_finite(prefactor) {
        return Err(Error::Overflow);
    }
    let inv_2z2 = ONE / (2.0 * z * z);
    let mut term = ONE;
    let mut sum = ONE;
    for k in 1..=k_max {
        term *= -(2.0 * k as f64 - 1.0) * inv_2z2;
        sum += term;
    }
    let omitted = term * (-(2.0 * (k_max as f64 + 1.0) - 1.0)) * inv_2z2;
    let minimal_term = minimal_term_index(z);
    Ok(AsymptoticErfc {
        value: prefactor * sum,
        truncation_bound: cabs(prefactor) * cabs(omitted),
        minimal_term,
        past_minimal_term: k_max > minimal_term,
    })
}

/// Asymptotic expansion truncated just before its smallest term.
pub fn erfc_asymptotic_optimal(z: Complex64) -> Result<AsymptoticErfc> {
    if z == Complex64::new(0.0, 0.0) {
        return Err(Error::OutOfRange("asymptotic erfc needs finite non-zero z"));
    }
    erfc_asymptotic(z, minimal_term_index(z).saturating_sub(1))
}
