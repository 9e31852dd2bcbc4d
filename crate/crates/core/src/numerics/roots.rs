//! Brent's bracketed root finder and Brent's parabolic/golden-section search,
//! the latter used for maximization.

use crate::error::{Error, Result};

const MAX_ITER: usize = 500;
const GOLDEN: f64 = 0.381_966_011_250_105_1;

fn checked<F>(g: &mut F, x: f64) -> Result<f64>
where
    F: FnMut(f64) -> Result<f64>,
{
    let v = g(x)?;
    if v.is_finite() {
        Ok(v)
    } else {
        Err(Error::NonFiniteEvaluation { at: x })
    }
}

/// Root of `g` in `[lo, hi]` to within `tol`, given `g(lo)·g(hi) < 0`.
pub fn find_root_bracketed<F>(mut g: F, lo: f64, hi: f64, tol: f64) -> Result<f64>
where
    F: FnMut(f64) -> f64,
{
    try_find_root_bracketed(|x| Ok(g(x)), lo, hi, tol)
}

pub fn try_find_root_bracketed<F>(mut g: F, lo: f64, hi: f64, tol: f64) -> Result<f64>
where
    F: FnMut(f64) -> Result<f64>,
{
    if !(lo < hi) || !(tol > 0.0) {
        return Err(Error::OutOfRange("root bracket must satisfy lo < hi and tol > 0"));
    }
    let (mut a, mut b) = (lo, hi);
    let mut fa = checked(&mut g, a)?;
    let mut fb = checked(&mut g, b)?;
    if fa == 0.0 {
        return Ok(a);
    }
    if fb == 0.0 {
        return Ok(b);
    }
    if (fa > 0.0) == (fb > 0.0) {
        return Err(Error::NoBracket {
            lo,
            hi,
            g_lo: fa,
            g_hi: fb,
        });
    }

    let (mut c, mut fc) = (b, fb);
    let mut d = b - a;
    let mut e = d;
    for _ in 0..MAX_ITER {
        if (fb > 0.0) == (fc > 0.0) {
            c = a;
            fc = fa;
            d = b - a;
            e = d;
        }
        if fc.abs() < fb.abs() {
            a = b;
            b = c;
            c = a;
            fa = fb;
            fb = fc;
            fc = fa;
        }
        let tol1 = 2.0 * f64::EPSILON * b.abs() + 0.5 * tol;
        let xm = 0.5 * (c - b);
        if xm.abs() <= tol1 || fb == 0.0 {
            return Ok(b);
        }
        if e.abs() >= tol1 && fa.abs() > fb.abs() {
            // inverse quadratic interpolation, secant when only two points
            let s = fb / fa;
            let (mut p, mut q);
            if a == c {
                p = 2.0 * xm * s;
                q = 1.0 - s;
            } else {
                let qa = fa / fc;
                let r = fb / fc;
                p = s * (2.0 * xm * qa * (qa - r) - (b - a) * (r - 1.0));
                q = (qa - 1.0) * (r - 1.0) * (s - 1.0);
            }
            if p > 0.0 {
                q = -q;
            } else {
                p = -p;
            }
            let min1 = 3.0 * xm * q - (tol1 * q).abs();
            let min2 = (e * q).abs();
            if 2.0 * p < min1.min(min2) {
                e = d;
                d = p / q;
            } else {
                d = xm;
                e = d;
            }
        } else {
            d = xm;
            e = d;
        }
        a = b;
        fa = fb;
        b += if d.abs() > tol1 { d } else { tol1.copysign(xm) };
        fb = checked(&mut g, b)?;
    }
    Ok(b)
}

/// Maximum of a unimodal `g` on `[lo, hi]`, located to within `tol`.
///
/// Returns `(argmax, max)`. A non-unimodal `g` yields a local maximum.
pub fn find_max_unimodal<F>(mut g: F, lo: f64, hi: f64, tol: f64) -> Result<(f64, f64)>
where
    F: FnMut(f64) -> f64,
{
    try_find_max_unimodal(|x| Ok(g(x)), lo, hi, tol)
}

pub fn try_find_max_unimodal<F>(mut g: F, lo: f64, hi: f64, tol: f64) -> Result<(f64, f64)>
where
    F: FnMut(f64) -> Result<f64>,
{
    if !(lo < hi) || !(tol > 0.0) {
        return Err(Error::OutOfRange("search interval must satisfy lo < hi and tol > 0"));
    }
    let mut h = |x: f64| checked(&mut g, x).map(|v| -v);
    let sqrt_eps = libm::sqrt(f64::EPSILON);

    let (mut a, mut b) = (lo, hi);
    let mut x = a + GOLDEN * (b - a);
    let (mut w, mut v) = (x, x);
    let mut fx = h(x)?;
    let (mut fw, mut fv) = (fx, fx);
    let mut d: f64 = 0.0;
    let mut e: f64 = 0.0;

    for _ in 0..MAX_ITER {
        let xm = 0.5 * (a + b);
        let tol1 = sqrt_eps * x.abs() + tol / 3.0;
        let tol2 = 2.0 * tol1;
        if (x - xm).abs() <= tol2 - 0.5 * (b - a) {
            break;
        }
        let mut golden = true;
        if e.abs() > tol1 {
            let r = (x - w) * (fx - fv);
            let mut q = (x - v) * (fx - fw);
            let mut p = (x - v) * q - (x - w) * r;
            q = 2.0 * (q - r);
            if q > 0.0 {
                p = -p;
            }
            q = q.abs();
            let e_prev = e;
            e = d;
            if p.abs() < (0.5 * q * e_prev).abs() && p > q * (a - x) && p < q * (b - x) {
                d = p / q;
                let u = x + d;
                if u - a < tol2 || b - u < tol2 {
                    d = tol1.copysign(xm - x);
                }
                golden = false;
            }
        }
        if golden {
            e = if x >= xm { a - x } else { b - x };
            d = GOLDEN * e;
        }
        let u = if d.abs() >= tol1 { x + d } else { x + tol1.copysign(d) };
        let fu = h(u)?;
        if fu <= fx {
            if u >= x {
                a = x;
            } else {
                b = x;
            }
            v = w;
            fv = fw;
            w = x;
            fw = fx;
            x = u;
            fx = fu;
        } else {
            if u < x {
                a = u;
            } else {
                b = u;
            }
            if fu <= fw || w == x {
                v = w;
                fv = fw;
                w = u;
                fw = fu;
            } else if fu <= fv || v == x || v == w {
                v = u;
                fv = fu;
            }
        }
    }

    // The interior search never visits the endpoints.
    let mut best = (x, -fx);
    for end in [lo, hi] {
        let val = -h(end)?;
        if val > best.1 {
            best = (end, val);
        }
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use core::f64::consts::{FRAC_PI_2, SQRT_2};

    #[test]
    fn linear_root() {
        let r = find_root_bracketed(|t| t - 0.5, 0.0, 1.0, 1e-12).unwrap();
        assert!((r - 0.5).abs() < 1e-12);
    }

    #[test]
    fn sqrt_two() {
        let r = find_root_bracketed(|t| t * t - 2.0, 1.0, 2.0, 1e-12).unwrap();
        assert!((r - SQRT_2).abs() < 1e-12);
    }

    #[test]
    fn same_sign_is_no_bracket() {
        let err = find_root_bracketed(|t| t * t + 1.0, -1.0, 1.0, 1e-12).unwrap_err();
        assert!(matches!(err, Error::NoBracket { .. }));
    }

    #[test]
    fn endpoint_root_returned_exactly() {
        assert_eq!(find_root_bracketed(|t| t, 0.0, 1.0, 1e-12).unwrap(), 0.0);
    }

    #[test]
    fn parabola_max() {
        let (x, m) = find_max_unimodal(|t| -(t - 0.3) * (t - 0.3), 0.0, 1.0, 1e-10).unwrap();
        assert!((x - 0.3).abs() < 1e-8);
        assert!(m.abs() < 1e-15);
    }

    #[test]
    fn sine_max() {
        let (x, m) = find_max_unimodal(libm::sin, 0.0, 3.0, 1e-10).unwrap();
        assert!((x - FRAC_PI_2).abs() < 1e-7);
        assert!((m - 1.0).abs() < 1e-14);
    }

    #[test]
    fn monotone_function_returns_endpoint() {
        let (x, m) = find_max_unimodal(|t| t, 0.0, 2.0, 1e-10).unwrap();
        assert_eq!(x, 2.0);
        assert_eq!(m, 2.0);
    }

    #[test]
    fn non_finite_is_an_error() {
        let err = find_max_unimodal(|_| f64::NAN, 0.0, 1.0, 1e-8).unwrap_err();
        assert!(matches!(err, Error::NonFiniteEvaluation { .. }));
    }
}
