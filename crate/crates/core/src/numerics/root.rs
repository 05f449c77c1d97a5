//! Bracketed scalar root finding (Brent's method with a bisection fallback).

use crate::error::{Error, Result};
use crate::scalar::Real;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RootSpec<T> {
    pub lo: T,
    pub hi: T,
    pub abs_tol: T,
    pub max_iter: usize,
}

impl<T: Real> RootSpec<T> {
    pub fn new(lo: T, hi: T, abs_tol: T, max_iter: usize) -> Result<Self> {
        let spec = Self {
            lo,
            hi,
            abs_tol,
            max_iter,
        };
        spec.validate()?;
        Ok(spec)
    }

    /// Bracket `[lo, hi]` with a tight tolerance and 200 iterations.
    pub fn bracket(lo: T, hi: T) -> Self {
        Self {
            lo,
            hi,
            abs_tol: T::tol(1e-13),
            max_iter: 200,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.lo < self.hi) || !self.lo.is_finite() || !self.hi.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "root bracket [{}, {}] is not an interval",
                self.lo, self.hi
            )));
        }
        if !(self.abs_tol > T::zero()) || self.max_iter == 0 {
            return Err(Error::InvalidParameter(
                "root tolerance and iteration budget must be positive".into(),
            ));
        }
        Ok(())
    }
}

/// Root of `f` inside `[spec.lo, spec.hi]`.
///
/// Requires `f(lo)·f(hi) ≤ 0`. The returned point always lies inside the
/// initial bracket; iteration stops once the bracket is narrower than
/// `abs_tol` (plus a few ulps of the root) or an exact zero is hit.
pub fn find_root_bracketed<T, F>(mut f: F, spec: &RootSpec<T>) -> Result<T>
where
    T: Real,
    F: FnMut(T) -> T,
{
    spec.validate()?;
    let two = T::lit(2.0);
    let half = T::lit(0.5);
    let three = T::lit(3.0);

    let (mut a, mut b) = (spec.lo, spec.hi);
    let (mut fa, mut fb) = (f(a), f(b));
    if fa.is_nan() || fb.is_nan() || fa * fb > T::zero() {
        return Err(Error::NoSignChange {
            lo: a.to_f64_lossy(),
            hi: b.to_f64_lossy(),
            f_lo: fa.to_f64_lossy(),
            f_hi: fb.to_f64_lossy(),
        });
    }
    if fa == T::zero() {
        return Ok(a);
    }
    if fb == T::zero() {
        return Ok(b);
    }

    // b: best estimate, c: opposite end of the bracket, a: previous b.
    let mut c = a;
    let mut fc = fa;
    let mut d = b - a;
    let mut e = d;
    for _ in 0..spec.max_iter {
        if fb.signum() == fc.signum() {
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
        let tol = two * T::epsilon() * b.abs() + half * spec.abs_tol;
        let m = half * (c - b);
        if m.abs() <= tol || fb == T::zero() {
            return Ok(b);
        }
        if e.abs() >= tol && fa.abs() > fb.abs() {
            // inverse quadratic interpolation, or secant when only two points
            let s = fb / fa;
            let (mut p, mut q);
            if a == c {
                p = two * m * s;
                q = T::one() - s;
            } else {
                let qa = fa / fc;
                let r = fb / fc;
                p = s * (two * m * qa * (qa - r) - (b - a) * (r - T::one()));
                q = (qa - T::one()) * (r - T::one()) * (s - T::one());
            }
            if p > T::zero() {
                q = -q;
            } else {
                p = -p;
            }
            if two * p < (three * m * q - (tol * q).abs()).min((e * q).abs()) {
                e = d;
                d = p / q;
            } else {
                d = m;
                e = m;
            }
        } else {
            d = m;
            e = m;
        }
        a = b;
        fa = fb;
        b = if d.abs() > tol {
            b + d
        } else if m > T::zero() {
            b + tol
        } else {
            b - tol
        };
        fb = f(b);
        if fb.is_nan() {
            return Err(Error::InvalidState(format!("root target evaluated to NaN at {}", b)));
        }
    }
    Err(Error::RootNonConvergence {
        max_iter: spec.max_iter,
        lo: b.min(c).to_f64_lossy(),
        hi: b.max(c).to_f64_lossy(),
    })
}

/// Fallible variant: the first error raised by `f` aborts the search.
pub fn try_find_root_bracketed<T, F>(mut f: F, spec: &RootSpec<T>) -> Result<T>
where
    T: Real,
    F: FnMut(T) -> Result<T>,
{
    let mut failure = None;
    let root = find_root_bracketed(
        |x| match f(x) {
            Ok(v) => v,
            Err(err) => {
                failure.get_or_insert(err);
                T::nan()
            }
        },
        spec,
    );
    match failure {
        Some(err) => Err(err),
        None => root,
    }
}
