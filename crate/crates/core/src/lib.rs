//! Thermal pairwise entanglement in spin-1/2 chains.
//!
//! * [`xy_exact`] — the XY chain in the thermodynamic limit, via Fermi integrals;
//! * [`witness`] — an entanglement witness built from energy and magnetization;
//! * [`ed_oracle`] — exact diagonalization of short chains, the reference for everything else;
//! * [`meanfield_aff`] — Hartree–Fock for the alternating antiferro/ferro chain.
//!
//! Solvers are generic over [`Real`] (`f32` or `f64`); the `*F64` aliases
//! below name the usual double-precision instantiations.

pub mod ed_oracle;
pub mod error;
pub mod linalg;
pub mod meanfield_aff;
pub mod numerics;
pub mod pairwise;
pub mod scalar;
pub mod witness;
pub mod xy_exact;

pub use error::{Error, Result};
pub use scalar::Real;

pub type BondObservablesF64 = pairwise::BondObservables<f64>;
pub type ConcurrenceF64 = pairwise::ConcurrenceResult<f64>;
pub type DensityMatrixF64 = pairwise::TwoQubitDensityMatrix<f64>;
pub type XYParamsF64 = xy_exact::XYChainParams<f64>;
pub type XYPointF64 = xy_exact::XYPointResult<f64>;
pub type MacroObservablesF64 = witness::MacroObservables<f64>;
pub type ChainSpecF64 = ed_oracle::FiniteChainSpec<f64>;
pub type ChainSpectrumF64 = ed_oracle::ChainSpectrum<f64>;
pub type ThermalEDF64 = ed_oracle::ThermalEDResult<f64>;
pub type AlternatingParamsF64 = meanfield_aff::AlternatingParams<f64>;
pub type MeanFieldStateF64 = meanfield_aff::MeanFieldState<f64>;
pub type MFResultF64 = meanfield_aff::MFResult<f64>;
