use thiserror::Error;

/// Errors raised across the crate.
///
/// Floating-point payloads are carried as `f64` regardless of the scalar
/// type the failing computation ran in.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("quadrature did not converge at {order} nodes (last estimates {previous:e} and {last:e})")]
    QuadratureNonConvergence { order: usize, previous: f64, last: f64 },

    #[error("no sign change on [{lo}, {hi}]: f(lo) = {f_lo:e}, f(hi) = {f_hi:e}")]
    NoSignChange { lo: f64, hi: f64, f_lo: f64, f_hi: f64 },

    #[error("root finding exceeded {max_iter} iterations (bracket [{lo}, {hi}])")]
    RootNonConvergence { max_iter: usize, lo: f64, hi: f64 },

    #[error("fixed-point iteration exceeded {iterations} iterations (residual {residual:e})")]
    FixedPointNonConvergence {
        iterations: usize,
        residual: f64,
        state: Vec<f64>,
    },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("invalid state: {0}")]
    InvalidState(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("chain size {n_sites} outside the supported range [2, 14]")]
    Size { n_sites: usize },

    #[error("eigendecomposition failed: {0}")]
    Eigen(String),
}

impl Error {
    /// True for failures of a numerical procedure (as opposed to bad input
    /// or a physically invalid state).
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::QuadratureNonConvergence { .. }
                | Error::NoSignChange { .. }
                | Error::RootNonConvergence { .. }
                | Error::FixedPointNonConvergence { .. }
                | Error::Eigen(_)
        )
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
