//! Damped fixed-point iteration `v ← (1 − α) v + α F(v)`.

use crate::error::{Error, Result};
use crate::scalar::Real;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FixedPointSpec<T> {
    pub mixing: T,
    pub abs_tol: T,
    pub max_iter: usize,
}

impl<T: Real> Default for FixedPointSpec<T> {
    fn default() -> Self {
        Self {
            mixing: T::lit(0.5),
            abs_tol: T::tol(1e-10),
            max_iter: 10_000,
        }
    }
}

impl<T: Real> FixedPointSpec<T> {
    pub fn validate(&self) -> Result<()> {
        if !(self.mixing > T::zero() && self.mixing <= T::one()) {
            return Err(Error::InvalidParameter(format!(
                "mixing {} outside (0, 1]",
                self.mixing
            )));
        }
        if !(self.abs_tol > T::zero()) || self.max_iter == 0 {
            return Err(Error::InvalidParameter(
                "fixed-point tolerance and iteration budget must be positive".into(),
            ));
        }
        Ok(())
    }
}

/// Converged fixed point plus the bookkeeping of how it was reached.
#[derive(Debug, Clone, PartialEq)]
pub struct FixedPoint<T> {
    pub value: Vec<T>,
    pub residual: T,
    pub iterations: usize,
}

/// Residual `max |F(v) − v|`.
pub fn max_change<T: Real>(a: &[T], b: &[T]) -> T {
    a.iter().zip(b).fold(T::zero(), |acc, (&x, &y)| acc.max((x - y).abs()))
}

/// Iterates until `max |F(v) − v| < abs_tol` and returns that `v`.
pub fn fixed_point_solve<T, F>(mut map: F, initial: &[T], spec: &FixedPointSpec<T>) -> Result<FixedPoint<T>>
where
    T: Real,
    F: FnMut(&[T]) -> Vec<T>,
{
    spec.validate()?;
    let keep = T::one() - spec.mixing;
    let mut v = initial.to_vec();
    let mut residual = T::infinity();
    for iteration in 0..spec.max_iter {
        let mapped = map(&v);
        if mapped.len() != v.len() {
            return Err(Error::DimensionMismatch {
                expected: v.len(),
                found: mapped.len(),
            });
        }
        residual = max_change(&mapped, &v);
        if !residual.is_finite() {
            break;
        }
        if residual < spec.abs_tol {
            return Ok(FixedPoint {
                value: v,
                residual,
                iterations: iteration,
            });
        }
        for (x, m) in v.iter_mut().zip(mapped) {
            *x = keep * *x + spec.mixing * m;
        }
    }
    Err(Error::FixedPointNonConvergence {
        iterations: spec.max_iter,
        residual: residual.to_f64_lossy(),
        state: v.iter().map(|x| x.to_f64_lossy()).collect(),
    })
}
