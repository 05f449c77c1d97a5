//! Gauss–Chebyshev quadrature of the first kind.
//!
//! Integrals of the form `∫₋₁¹ g(x) / √(1 − x²) dx` are approximated by
//! `(π/n) Σᵢ g(xᵢ)` with nodes `xᵢ = cos((2i − 1)π / 2n)`. Under `x = cos θ`
//! this is the midpoint rule on `[0, π]`, so for analytic `g` the error
//! decays exponentially and the endpoint singularity of the weight never
//! has to be evaluated.

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Node budget and stopping rule for [`integrate_chebyshev_weight`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureSpec<T> {
    pub order: usize,
    pub max_order: usize,
    pub rel_tol: T,
}

impl<T: Real> Default for QuadratureSpec<T> {
    fn default() -> Self {
        Self {
            order: 64,
            max_order: 16384,
            rel_tol: T::tol(1e-12),
        }
    }
}

impl<T: Real> QuadratureSpec<T> {
    pub fn new(order: usize, max_order: usize, rel_tol: T) -> Result<Self> {
        let spec = Self {
            order,
            max_order,
            rel_tol,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if self.order < 8 {
            return Err(Error::InvalidParameter(format!(
                "quadrature order {} below the minimum of 8",
                self.order
            )));
        }
        if self.max_order < self.order {
            return Err(Error::InvalidParameter(format!(
                "max_order {} below order {}",
                self.max_order, self.order
            )));
        }
        if !(self.rel_tol > T::zero() && self.rel_tol < T::one()) {
            return Err(Error::InvalidParameter(format!(
                "rel_tol {} outside (0, 1)",
                self.rel_tol
            )));
        }
        Ok(())
    }
}

/// Fixed-order rule: returns `(estimate, Σ wᵢ|g(xᵢ)|)`.
///
/// The second value is the scale against which convergence is judged, so
/// integrals that cancel to zero still terminate.
pub fn chebyshev_rule<T, G>(g: &mut G, n: usize) -> (T, T)
where
    T: Real,
    G: FnMut(T) -> T,
{
    let weight = T::PI() / T::lit(n as f64);
    let step = T::PI() / T::lit(2.0 * n as f64);
    let mut sum = T::zero();
    let mut abs_sum = T::zero();
    for i in 0..n {
        let x = (T::lit((2 * i + 1) as f64) * step).cos();
        let v = g(x);
        sum = sum + v;
        abs_sum = abs_sum + v.abs();
    }
    (sum * weight, abs_sum * weight)
}

/// `∫₋₁¹ g(x)/√(1−x²) dx`, doubling the node count from `spec.order`
/// until two successive estimates agree to `spec.rel_tol`.
pub fn integrate_chebyshev_weight<T, G>(mut g: G, spec: &QuadratureSpec<T>) -> Result<T>
where
    T: Real,
    G: FnMut(T) -> T,
{
    spec.validate()?;
    let mut n = spec.order;
    let (mut previous, _) = chebyshev_rule(&mut g, n);
    let mut older = T::nan();
    loop {
        let next_n = n * 2;
        if next_n > spec.max_order {
            return Err(Error::QuadratureNonConvergence {
                order: n,
                previous: older.to_f64_lossy(),
                last: previous.to_f64_lossy(),
            });
        }
        let (estimate, scale) = chebyshev_rule(&mut g, next_n);
        if !estimate.is_finite() {
            return Err(Error::QuadratureNonConvergence {
                order: next_n,
                previous: previous.to_f64_lossy(),
                last: estimate.to_f64_lossy(),
            });
        }
        if (estimate - previous).abs() <= spec.rel_tol * scale.max(estimate.abs()) {
            return Ok(estimate);
        }
        older = previous;
        previous = estimate;
        n = next_n;
    }
}

/// `∫₋₁¹ √((1+x)/(1−x)) g(x) dx`, rewritten as `∫ (1+x) g(x)/√(1−x²) dx`.
pub fn integrate_plus_ratio<T, G>(mut g: G, spec: &QuadratureSpec<T>) -> Result<T>
where
    T: Real,
    G: FnMut(T) -> T,
{
    integrate_chebyshev_weight(|x| (T::one() + x) * g(x), spec)
}

/// `∫₋₁¹ √((1−x)/(1+x)) g(x) dx`, rewritten as `∫ (1−x) g(x)/√(1−x²) dx`.
pub fn integrate_minus_ratio<T, G>(mut g: G, spec: &QuadratureSpec<T>) -> Result<T>
where
    T: Real,
    G: FnMut(T) -> T,
{
    integrate_chebyshev_weight(|x| (T::one() - x) * g(x), spec)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::PI;

    #[test]
    fn weight_normalization() {
        let v = integrate_chebyshev_weight(|_| 1.0, &QuadratureSpec::default()).unwrap();
        assert_abs_diff_eq!(v, PI, epsilon = 1e-14);
    }

    #[test]
    fn odd_moment_vanishes() {
        let v = integrate_chebyshev_weight(|x: f64| x, &QuadratureSpec::default()).unwrap();
        assert_abs_diff_eq!(v, 0.0, epsilon = 1e-14);
    }

    #[test]
    fn second_moment() {
        let v = integrate_chebyshev_weight(|x: f64| x * x, &QuadratureSpec::default()).unwrap();
        assert_abs_diff_eq!(v, PI / 2.0, epsilon = 1e-14);
    }

    #[test]
    fn exact_up_to_degree_2n_minus_1() {
        // ∫ x^{2m}/√(1−x²) = π (2m−1)!! / (2m)!!
        let n = 8;
        for m in 0..n {
            let mut g = |x: f64| x.powi(2 * m as i32);
            let (v, _) = chebyshev_rule(&mut g, n);
            let mut exact = PI;
            for k in 1..=m {
                exact *= (2 * k - 1) as f64 / (2 * k) as f64;
            }
            assert_abs_diff_eq!(v, exact, epsilon = 1e-13);
        }
        // degree 2n is no longer exact
        let mut g = |x: f64| x.powi(2 * n as i32);
        let (v, _) = chebyshev_rule(&mut g, n);
        let mut exact = PI;
        for k in 1..=n {
            exact *= (2 * k - 1) as f64 / (2 * k) as f64;
        }
        assert!((v - exact).abs() > 1e-6);
    }

    #[test]
    fn ratio_forms() {
        // ∫ √((1+x)/(1−x)) dx = π, same for the mirrored ratio
        let spec = QuadratureSpec::default();
        assert_abs_diff_eq!(integrate_plus_ratio(|_| 1.0, &spec).unwrap(), PI, epsilon = 1e-13);
        assert_abs_diff_eq!(integrate_minus_ratio(|_| 1.0, &spec).unwrap(), PI, epsilon = 1e-13);
    }

    #[test]
    fn cusp_fails_to_converge() {
        let spec = QuadratureSpec::new(8, 64, 1e-12).unwrap();
        let err = integrate_chebyshev_weight(|x: f64| x.abs().sqrt(), &spec).unwrap_err();
        assert!(matches!(err, Error::QuadratureNonConvergence { order: 64, .. }));
    }

    #[test]
    fn rejects_bad_specs() {
        assert!(QuadratureSpec::new(4, 64, 1e-12).is_err());
        assert!(QuadratureSpec::new(64, 32, 1e-12).is_err());
        assert!(QuadratureSpec::new(64, 128, 0.0).is_err());
        assert!(QuadratureSpec::new(64, 128, 1.0).is_err());
    }

    #[test]
    fn single_precision() {
        let v = integrate_chebyshev_weight(|x: f32| x * x, &QuadratureSpec::default()).unwrap();
        assert!((v - std::f32::consts::FRAC_PI_2).abs() < 1e-5);
    }
}
