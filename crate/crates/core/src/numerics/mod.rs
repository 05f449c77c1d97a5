//! Numerical kernels: weighted quadrature, bracketed root finding and
//! damped fixed-point iteration.

pub mod fixed_point;
pub mod quadrature;
pub mod root;

pub use fixed_point::{fixed_point_solve, FixedPoint, FixedPointSpec};
pub use quadrature::{integrate_chebyshev_weight, QuadratureSpec};
pub use root::{find_root_bracketed, try_find_root_bracketed, RootSpec};
