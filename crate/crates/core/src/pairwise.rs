//! Two-qubit reduced density matrices and their concurrence.
//!
//! # Basis and sign convention
//!
//! Matrices are written in the ordered basis `{↑↑, ↑↓, ↓↑, ↓↓}` (index
//! `2·s_i + s_j`, with `s = 0` for ↑). Spinless fermions map onto spins by
//! `S^z = n − 1/2`, i.e. an occupied site is spin up. Every other module in
//! the crate (exact diagonalization, the XY solution, mean field) produces
//! observables in this convention.
//!
//! Under it, a U(1)-symmetric pair state is an X-state with
//!
//! ```text
//!   ⎡ X⁺  0   0   0  ⎤      X⁺ = ⟨n_i n_j⟩        Y⁺ = ⟨n_i (1 − n_j)⟩
//!   ⎢ 0   Y⁺  Z*  0  ⎥      Y⁻ = ⟨(1 − n_i) n_j⟩  X⁻ = ⟨(1 − n_i)(1 − n_j)⟩
//!   ⎢ 0   Z   Y⁻  0  ⎥      Z  = ⟨c†_i c_j⟩ = ⟨S⁺_i S⁻_j⟩
//!   ⎣ 0   0   0   X⁻ ⎦
//! ```

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::linalg::{adjoint, conjugate, hermitian_eigen, matmul, zero_matrix, CMatrix};
use crate::scalar::Real;

/// Positivity/Hermiticity/trace tolerance for thermal two-site states.
pub const STATE_TOL: f64 = 1e-9;

/// Basis index of a two-spin configuration (`true` = ↑).
pub const fn basis_index(up_i: bool, up_j: bool) -> usize {
    (!up_i as usize) * 2 + (!up_j as usize)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoQubitDensityMatrix<T> {
    entries: CMatrix<T, 4>,
}

impl<T: Real> TwoQubitDensityMatrix<T> {
    /// Validated construction: Hermitian, unit trace, positive semidefinite
    /// (all within [`STATE_TOL`]).
    pub fn new(entries: CMatrix<T, 4>) -> Result<Self> {
        let rho = Self { entries };
        rho.validate()?;
        Ok(rho)
    }

    /// Construction without validation; [`wootters_concurrence`] still checks.
    pub fn from_entries_unchecked(entries: CMatrix<T, 4>) -> Self {
        Self { entries }
    }

    pub fn entries(&self) -> &CMatrix<T, 4> {
        &self.entries
    }

    pub fn trace(&self) -> T {
        (0..4).map(|i| self.entries[i][i].re).sum()
    }

    /// Pure-state projector `|ψ⟩⟨ψ|` (ψ normalized internally).
    pub fn pure(psi: [Complex<T>; 4]) -> Result<Self> {
        let norm = psi.iter().map(|z| z.norm_sqr()).sum::<T>().sqrt();
        if !(norm > T::zero()) {
            return Err(Error::InvalidState("zero state vector".into()));
        }
        let mut m = zero_matrix();
        for i in 0..4 {
            for j in 0..4 {
                m[i][j] = psi[i] * psi[j].conj() / (norm * norm);
            }
        }
        Self::new(m)
    }

    pub fn maximally_mixed() -> Self {
        let mut m = zero_matrix();
        for (i, row) in m.iter_mut().enumerate() {
            row[i] = Complex::new(T::lit(0.25), T::zero());
        }
        Self { entries: m }
    }

    /// `(U₁ ⊗ U₂) ρ (U₁ ⊗ U₂)†`.
    pub fn local_unitary(&self, u1: &CMatrix<T, 2>, u2: &CMatrix<T, 2>) -> Self {
        let mut u: CMatrix<T, 4> = zero_matrix();
        for a in 0..2 {
            for b in 0..2 {
                for c in 0..2 {
                    for d in 0..2 {
                        u[2 * a + b][2 * c + d] = u1[a][c] * u2[b][d];
                    }
                }
            }
        }
        Self {
            entries: matmul(&matmul(&u, &self.entries), &adjoint(&u)),
        }
    }

    /// Eigenvalues of ρ, ascending.
    pub fn eigenvalues(&self) -> [T; 4] {
        hermitian_eigen(&self.entries).0
    }

    pub fn validate(&self) -> Result<()> {
        let tol = T::tol(STATE_TOL);
        for i in 0..4 {
            for j in 0..4 {
                if !(self.entries[i][j].re.is_finite() && self.entries[i][j].im.is_finite()) {
                    return Err(Error::InvalidState("non-finite density-matrix entry".into()));
                }
                if (self.entries[i][j] - self.entries[j][i].conj()).norm() > tol {
                    return Err(Error::InvalidState(format!(
                        "density matrix not Hermitian at ({i}, {j})"
                    )));
                }
            }
        }
        let trace = self.trace();
        if (trace - T::one()).abs() > tol {
            return Err(Error::InvalidState(format!("density matrix trace {trace} ≠ 1")));
        }
        let min = self.eigenvalues()[0];
        if min < -tol {
            return Err(Error::InvalidState(format!(
                "density matrix has negative eigenvalue {min}"
            )));
        }
        Ok(())
    }

    /// X-state elements. Off-X entries (present only without U(1)
    /// symmetry) are dropped.
    pub fn bond_observables(&self) -> BondObservables<T> {
        let e = &self.entries;
        BondObservables {
            x_plus: e[0][0].re,
            y_plus: e[1][1].re,
            y_minus: e[2][2].re,
            z: e[2][1],
            x_minus: e[3][3].re,
        }
    }

    /// Largest magnitude among entries that vanish for a U(1)-symmetric
    /// state (everything except the diagonal and the ↑↓/↓↑ coherence).
    pub fn off_x_weight(&self) -> T {
        let mut w = T::zero();
        for i in 0..4 {
            for j in 0..4 {
                let allowed = i == j || (i, j) == (1, 2) || (i, j) == (2, 1);
                if !allowed {
                    w = w.max(self.entries[i][j].norm());
                }
            }
        }
        w
    }
}

/// The five independent elements of a U(1)-symmetric pair state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BondObservables<T> {
    pub x_plus: T,
    pub y_plus: T,
    pub y_minus: T,
    pub z: Complex<T>,
    pub x_minus: T,
}

impl<T: Real> BondObservables<T> {
    /// Builds the diagonal from site densities and the pair correlation
    /// `⟨n_i n_j⟩`.
    pub fn from_densities(n_i: T, n_j: T, x_plus: T, z: Complex<T>) -> Self {
        Self {
            x_plus,
            y_plus: n_i - x_plus,
            y_minus: n_j - x_plus,
            z,
            x_minus: T::one() - n_i - n_j + x_plus,
        }
    }

    /// `⟨n_i⟩`.
    pub fn n_i(&self) -> T {
        self.x_plus + self.y_plus
    }

    /// `⟨n_j⟩`.
    pub fn n_j(&self) -> T {
        self.x_plus + self.y_minus
    }

    pub fn validate(&self) -> Result<()> {
        let tol = T::tol(STATE_TOL);
        let diag = [self.x_plus, self.y_plus, self.y_minus, self.x_minus];
        if diag.iter().any(|v| !v.is_finite()) || !self.z.re.is_finite() || !self.z.im.is_finite() {
            return Err(Error::InvalidState("non-finite bond observable".into()));
        }
        if diag.iter().any(|&v| v < -tol || v > T::one() + tol) {
            return Err(Error::InvalidState(format!(
                "bond probabilities {diag:?} outside [0, 1]"
            )));
        }
        let total: T = diag.iter().copied().sum();
        if (total - T::one()).abs() > tol {
            return Err(Error::InvalidState(format!("bond probabilities sum to {total}")));
        }
        if self.z.norm_sqr() > self.y_plus * self.y_minus + tol {
            return Err(Error::InvalidState(format!(
                "|z|² = {} exceeds y⁺·y⁻ = {}",
                self.z.norm_sqr(),
                self.y_plus * self.y_minus
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConcurrenceResult<T> {
    /// `μ₁ − μ₂ − μ₃ − μ₄` before clamping.
    pub c_tilde: T,
    /// `max(0, c_tilde)`.
    pub c: T,
}

impl<T: Real> ConcurrenceResult<T> {
    pub fn from_c_tilde(c_tilde: T) -> Self {
        Self {
            c_tilde,
            c: c_tilde.max(T::zero()),
        }
    }
}

/// `σ_y ⊗ σ_y` in the `{↑↑, ↑↓, ↓↑, ↓↓}` basis (a real matrix).
fn sigma_yy<T: Real>() -> CMatrix<T, 4> {
    let mut m = zero_matrix();
    let one = Complex::new(T::one(), T::zero());
    m[0][3] = -one;
    m[1][2] = one;
    m[2][1] = one;
    m[3][0] = -one;
    m
}

/// Wootters concurrence.
///
/// The `μᵢ` are the singular values of `√ρ (σ_y⊗σ_y) √ρ*`, whose squares are
/// the eigenvalues of `ρ ρ̃` with `ρ̃ = (σ_y⊗σ_y) ρ* (σ_y⊗σ_y)`. Eigenvalues of
/// ρ in `(−STATE_TOL, 0)` are clamped to zero; anything more negative is an
/// invalid state.
pub fn wootters_concurrence<T: Real>(rho: &TwoQubitDensityMatrix<T>) -> Result<ConcurrenceResult<T>> {
    rho.validate()?;
    let (values, vectors) = hermitian_eigen(rho.entries());
    let mut sqrt_diag: CMatrix<T, 4> = zero_matrix();
    for i in 0..4 {
        sqrt_diag[i][i] = Complex::new(values[i].max(T::zero()).sqrt(), T::zero());
    }
    let root = matmul(&matmul(&vectors, &sqrt_diag), &adjoint(&vectors));
    let m = matmul(&matmul(&root, &sigma_yy()), &conjugate(&root));
    let (mut squares, _) = hermitian_eigen(&matmul(&m, &adjoint(&m)));
    // descending; ties are irrelevant to μ₁ − μ₂ − μ₃ − μ₄
    squares.reverse();
    let mu = squares.map(|v| v.max(T::zero()).sqrt());
    Ok(ConcurrenceResult::from_c_tilde(mu[0] - mu[1] - mu[2] - mu[3]))
}

/// Closed form for X-states: `c̃ = 2(|Z| − √(X⁺X⁻))`.
pub fn xstate_concurrence<T: Real>(b: &BondObservables<T>) -> Result<ConcurrenceResult<T>> {
    b.validate()?;
    let product = b.x_plus * b.x_minus;
    if product < -T::tol(STATE_TOL) {
        return Err(Error::InvalidState(format!("X⁺·X⁻ = {product} is negative")));
    }
    let two = T::lit(2.0);
    Ok(ConcurrenceResult::from_c_tilde(
        two * (b.z.norm() - product.max(T::zero()).sqrt()),
    ))
}

/// Embeds X-state observables into the full 4×4 matrix.
pub fn bond_observables_to_density_matrix<T: Real>(b: &BondObservables<T>) -> Result<TwoQubitDensityMatrix<T>> {
    b.validate()?;
    let mut m = zero_matrix();
    let re = |v: T| Complex::new(v, T::zero());
    m[0][0] = re(b.x_plus);
    m[1][1] = re(b.y_plus);
    m[2][2] = re(b.y_minus);
    m[3][3] = re(b.x_minus);
    m[1][2] = b.z.conj();
    m[2][1] = b.z;
    TwoQubitDensityMatrix::new(m)
}
