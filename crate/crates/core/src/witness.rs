//! Thermodynamic entanglement witness for the XY chain.
//!
//! Internal energy and magnetization fix both nearest-neighbour
//! observables of the chain,
//!
//! ```text
//!   Z = (U + M h)/NJ + h/2J,        ⟨n⟩ = M/N + 1/2,
//! ```
//!
//! so the pairwise entanglement condition becomes a condition on
//! calorimetry and magnetometry alone:
//!
//! ```text
//!   Φ(U, M, h) = ((U + M h)/NJ + h/2J + √2/2)² − (M/N)² − 1/4  <  0.
//! ```
//!
//! `U` here is the energy of the fermion Hamiltonian
//! `Σ J(c†ᵢcᵢ₊₁ + h.c.)/2 − h Σ nᵢ`, which sits `N h / 2` below the spin
//! Hamiltonian's `⟨H⟩`. Use [`MacroObservables::from_spin_energy`] when the
//! energy comes from a spin calculation or measurement.

use crate::error::{Error, Result};
use crate::scalar::Real;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MacroObservables<T> {
    /// Internal energy (extensive, fermion convention).
    pub u: T,
    /// Total magnetization `Σ⟨Sᶻ⟩`, positive along the field.
    pub m: T,
    pub n_sites: usize,
    pub j: T,
    pub h: T,
}

impl<T: Real> MacroObservables<T> {
    pub fn new(u: T, m: T, n_sites: usize, j: T, h: T) -> Result<Self> {
        let obs = Self { u, m, n_sites, j, h };
        obs.validate()?;
        Ok(obs)
    }

    /// From the spin-Hamiltonian energy `⟨H⟩ = U + N h/2`.
    pub fn from_spin_energy(spin_u: T, m: T, n_sites: usize, j: T, h: T) -> Result<Self> {
        let n = T::from_usize(n_sites).unwrap_or_else(T::zero);
        Self::new(spin_u - n * h / T::lit(2.0), m, n_sites, j, h)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_sites < 2 {
            return Err(Error::InvalidParameter(format!(
                "need at least two sites, got {}",
                self.n_sites
            )));
        }
        if !(self.j > T::zero()) || !self.j.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "coupling J = {} must be positive",
                self.j
            )));
        }
        if !self.u.is_finite() || !self.m.is_finite() || !self.h.is_finite() {
            return Err(Error::InvalidParameter("U, M and h must be finite".into()));
        }
        let half = T::lit(self.n_sites as f64 / 2.0);
        if self.m.abs() > half {
            return Err(Error::InvalidParameter(format!(
                "|M| = {} exceeds N/2 = {half}",
                self.m.abs()
            )));
        }
        Ok(())
    }

    fn n(&self) -> T {
        T::lit(self.n_sites as f64)
    }

    /// Nearest-neighbour hopping `Z` reconstructed from `(U, M)`.
    pub fn hopping(&self) -> T {
        (self.u + self.m * self.h) / (self.n() * self.j) + self.h / (T::lit(2.0) * self.j)
    }

    /// Site density `⟨n⟩ = M/N + 1/2`.
    pub fn density(&self) -> T {
        self.m / self.n() + T::lit(0.5)
    }
}

/// `Φ(U, M, h)`; a negative value certifies an entangled thermal state.
pub fn thermal_witness<T: Real>(obs: &MacroObservables<T>) -> T {
    let shifted = obs.hopping() + T::FRAC_1_SQRT_2();
    let m_density = obs.m / obs.n();
    shifted * shifted - m_density * m_density - T::lit(0.25)
}

/// Zero-field criterion `|U|/NJ > (√2 − 1)/2`, a wider region than the
/// familiar `|U|/NJ > 1/4`.
pub fn zero_field_energy_criterion<T: Real>(u: T, n_sites: usize, j: T) -> bool {
    let threshold = (T::SQRT_2() - T::one()) / T::lit(2.0);
    u.abs() / (T::lit(n_sites as f64) * j) > threshold
}

/// The older sufficient condition `|U|/NJ > 1/4`, kept for comparison.
pub fn quarter_energy_criterion<T: Real>(u: T, n_sites: usize, j: T) -> bool {
    u.abs() / (T::lit(n_sites as f64) * j) > T::lit(0.25)
}
