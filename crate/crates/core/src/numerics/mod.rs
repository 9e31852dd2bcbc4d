//! Numerical kernels used throughout the crate.
//!
//! Everything here is deterministic: no randomized sampling, no
//! data-dependent thread scheduling. Given the same inputs and tolerances the
//! results are bit-identical.

mod combinatorics;
mod erfc;
mod quadrature;
mod roots;

pub use combinatorics::{binomial, double_factorial};
pub use erfc::{erfc, erfc_asymptotic, erfc_asymptotic_optimal, erfcx, faddeeva, AsymptoticErfc};
pub use quadrature::{
    integrate_adaptive, integrate_with_breakpoints, try_integrate_adaptive, try_integrate_with_breakpoints, Estimate,
    QuadratureSpec, TailPolicy,
};
pub use roots::{find_max_unimodal, find_root_bracketed, try_find_max_unimodal, try_find_root_bracketed};

use num_complex::Complex64;

pub(crate) const SQRT_PI: f64 = 1.772_453_850_905_516;
pub(crate) const FRAC_2_SQRT_PI: f64 = core::f64::consts::FRAC_2_SQRT_PI;

/// Largest `x` with `exp(x)` finite.
pub(crate) const MAX_EXP_ARG: f64 = 709.782_712_893_384;

/// Complex exponential through `libm`.
#[inline]
pub(crate) fn cexp(z: Complex64) -> Complex64 {
    let m = libm::exp(z.re);
    Complex64::new(m * libm::cos(z.im), m * libm::sin(z.im))
}

/// Principal complex logarithm through `libm`.
#[inline]
pub(crate) fn cln(z: Complex64) -> Complex64 {
    Complex64::new(libm::log(libm::hypot(z.re, z.im)), libm::atan2(z.im, z.re))
}

#[inline]
pub(crate) fn cabs(z: Complex64) -> f64 {
    libm::hypot(z.re, z.im)
}

#[inline]
pub(crate) fn is_finite(z: Complex64) -> bool {
    z.re.is_finite() && z.im.is_finite()
}
