//! Bracketed one-dimensional searches.
//!
//! The Chernoff objectives are unimodal on their domains, so golden-section
//! search on a fixed bracket is enough; no derivatives are needed.

use crate::error::{Error, Result};
use crate::scalar::{lit, Real};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Optimum<T> {
    pub argument: T,
    pub value: T,
}

/// Golden-section maximization of a unimodal `f` on `[lo, hi]`.
///
/// Only interior points are evaluated, so `f` may be singular at the ends.
pub fn golden_max<T: Real, F: Fn(T) -> T>(f: F, lo: T, hi: T, tol: T) -> Optimum<T> {
    let inv_phi = lit::<T>(0.618_033_988_749_894_8);
    let (mut a, mut b) = (lo, hi);
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    // Bracket shrinks geometrically; the cap only guards against NaN loops.
    for _ in 0..400 {
        if (b - a).abs() <= tol {
            break;
        }
        if fc >= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    if fc >= fd {
        Optimum {
            argument: c,
            value: fc,
        }
    } else {
        Optimum {
            argument: d,
            value: fd,
        }
    }
}

pub fn golden_min<T: Real, F: Fn(T) -> T>(f: F, lo: T, hi: T, tol: T) -> Optimum<T> {
    let o = golden_max(|x| -f(x), lo, hi, tol);
    Optimum {
        argument: o.argument,
        value: -o.value,
    }
}

/// Maximize and insist the optimum is interior: an argmax pinned to an end of
/// the bracket means the objective was not unimodal there.
pub fn interior_max<T: Real, F: Fn(T) -> T>(f: F, lo: T, hi: T, tol: T) -> Result<Optimum<T>> {
    let o = golden_max(&f, lo, hi, tol);
    let margin = tol * lit(16.0);
    if !o.value.is_finite() || o.argument - lo <= margin || hi - o.argument <= margin {
        return Err(Error::Bracket(format!(
            "argmax {:?} on [{:?}, {:?}]",
            o.argument, lo, hi
        )));
    }
    Ok(o)
}

/// Bisection for the root of a monotone `f` with `f(lo)` and `f(hi)` of opposite sign.
pub fn bisect<T: Real, F: Fn(T) -> T>(f: F, lo: T, hi: T, tol: T) -> Result<T> {
    let (mut a, mut b) = (lo, hi);
    let (fa, fb) = (f(a), f(b));
    if fa == T::zero() {
        return Ok(a);
    }
    if fb == T::zero() {
        return Ok(b);
    }
    if (fa > T::zero()) == (fb > T::zero()) {
        return Err(Error::Bracket(format!("no sign change on [{a:?}, {b:?}]")));
    }
    let a_positive = fa > T::zero();
    for _ in 0..400 {
        let m = a + (b - a) / lit(2.0);
        if (b - a).abs() <= tol * (T::one() + m.abs()) {
            return Ok(m);
        }
        if (f(m) > T::zero()) == a_positive {
            a = m;
        } else {
            b = m;
        }
    }
    Ok(a + (b - a) / lit(2.0))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn golden_finds_parabola_vertex() {
        let o = golden_max(|x: f64| -(x - 0.3).powi(2) + 2.0, 0.0, 1.0, 1e-12);
        assert!((o.argument - 0.3).abs() < 1e-7);
        assert!((o.value - 2.0).abs() < 1e-14);
    }

    #[test]
    fn interior_max_rejects_monotone_objective() {
        assert!(interior_max(|x: f64| x, 0.0, 1.0, 1e-10).is_err());
    }

    #[test]
    fn bisect_sqrt_two() {
        let r = bisect(|x: f64| x * x - 2.0, 0.0, 2.0, 1e-14).unwrap();
        assert!((r - 2f64.sqrt()).abs() < 1e-12);
    }
}
