//! Bracketed 1-D root finding and unimodal maximisation.

use crate::error::{Error, Result};
use crate::scalar::Scalar;

const MAX_BISECTIONS: usize = 200;
const MAX_NEWTON: usize = 60;

/// Narrows `[lo, hi]` around a sign change of `f` until its width is below `width`.
pub fn bisect<T: Scalar>(
    f: impl Fn(T) -> T,
    mut lo: T,
    mut hi: T,
    width: T,
    what: &'static str,
) -> Result<(T, T)> {
    let mut flo = f(lo);
    let fhi = f(hi);
    if flo == T::zero() {
        return Ok((lo, lo));
    }
    if fhi == T::zero() {
        return Ok((hi, hi));
    }
    if flo.signum() == fhi.signum() {
        return Err(Error::NoConvergence {
            what,
            iterations: 0,
            lo: lo.as_f64(),
            hi: hi.as_f64(),
        });
    }
    let half = T::lit(0.5);
    for _ in 0..MAX_BISECTIONS {
        if (hi - lo).abs() <= width {
            return Ok((lo, hi));
        }
        let mid = lo + (hi - lo) * half;
        if mid <= lo || mid >= hi {
            return Ok((lo, hi));
        }
        let fm = f(mid);
        if fm == T::zero() {
            return Ok((mid, mid));
        }
        if fm.signum() == flo.signum() {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    Err(Error::NoConvergence {
        what,
        iterations: MAX_BISECTIONS,
        lo: lo.as_f64(),
        hi: hi.as_f64(),
    })
}

/// Bisection down to `T::BISECT_TOL` (relative to the bracket scale) followed by
/// Newton polishing that never leaves the bracket. Stops once `|f| <= ftol`, or
/// once the sign change is pinned between floats a few ulps apart (an
/// ill-conditioned root whose residual cannot reach `ftol`).
pub fn solve_bracketed<T: Scalar>(
    f: impl Fn(T) -> T,
    df: impl Fn(T) -> T,
    lo: T,
    hi: T,
    ftol: T,
    what: &'static str,
) -> Result<T> {
    let scale = lo.abs().max(hi.abs()).max(T::one());
    let (mut a, mut b) = bisect(&f, lo, hi, T::lit(T::BISECT_TOL) * scale, what)?;
    let mut x = a + (b - a) * T::lit(0.5);
    let fa_sign = f(a).signum();
    for _ in 0..MAX_NEWTON {
        let fx = f(x);
        if fx.abs() <= ftol {
            return Ok(x);
        }
        if fx.signum() == fa_sign {
            a = x;
        } else {
            b = x;
        }
        let d = df(x);
        let mut next = x - fx / d;
        if !next.is_finite() || next <= a.min(b) || next >= a.max(b) {
            next = a + (b - a) * T::lit(0.5);
        }
        if next == x {
            break;
        }
        x = next;
    }
    let ulps = T::epsilon() * T::lit(8.0) * x.abs().max(T::min_positive_value());
    if f(x).abs() <= ftol || (b - a).abs() <= ulps {
        Ok(x)
    } else {
        Err(Error::NoConvergence {
            what,
            iterations: MAX_NEWTON,
            lo: a.as_f64(),
            hi: b.as_f64(),
        })
    }
}

/// Golden-section search for the maximum of a unimodal `f` on `[lo, hi]`.
pub fn golden_section_max<T: Scalar>(f: impl Fn(T) -> T, mut lo: T, mut hi: T, tol: T) -> T {
    let inv_phi = (T::lit(5.0).sqrt() - T::one()) * T::lit(0.5);
    let mut c = hi - (hi - lo) * inv_phi;
    let mut d = lo + (hi - lo) * inv_phi;
    let mut fc = f(c);
    let mut fd = f(d);
    for _ in 0..300 {
        if (hi - lo).abs() <= tol {
            break;
        }
        if fc >= fd {
            hi = d;
            d = c;
            fd = fc;
            c = hi - (hi - lo) * inv_phi;
            fc = f(c);
        } else {
            lo = c;
            c = d;
            fc = fd;
            d = lo + (hi - lo) * inv_phi;
            fd = f(d);
        }
    }
    (lo + hi) * T::lit(0.5)
}
