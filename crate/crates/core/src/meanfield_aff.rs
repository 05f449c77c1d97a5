//! Hartree–Fock mean field for the alternating antiferro/ferro chain
//! `H = Σ J_a Sₐⱼ·S_bⱼ + J_f S_bⱼ·Sₐⱼ₊₁ − h Σ Sᶻ`, `J_a > 0 > J_f`.
//!
//! After Jordan–Wigner, the `SᶻSᶻ` terms are decoupled into the densities
//! `d_a = ⟨a†a⟩`, `d_b = ⟨b†b⟩` and the bond amplitudes
//! `p_ab = ⟨b†ⱼ aⱼ⟩`, `p_ba = ⟨a†ⱼ₊₁ bⱼ⟩`. The two-site unit cell gives a
//! 2×2 Bloch Hamiltonian in the `(a, b)` basis,
//!
//! ```text
//!   H₀₀ = (J_a + J_f)(d_b − ½) − h        H₁₁ = (J_a + J_f)(d_a − ½) − h
//!   H₀₁ = J_a(½ − p_ab) e^{ik/2} + J_f(½ − p_ba*) e^{−ik/2}
//! ```
//!
//! whose two eigenvalues are the quasiparticle bands. There is no pairing
//! term and no particle-number constraint: `h` plays the role of the
//! chemical potential.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::linalg::CMatrix;
use crate::numerics::fixed_point::max_change;
use crate::numerics::{fixed_point_solve, try_find_root_bracketed, FixedPointSpec, RootSpec};
use crate::pairwise::{xstate_concurrence, BondObservables, ConcurrenceResult};
use crate::scalar::Real;
use crate::xy_exact::logistic;

pub const DEFAULT_N_K: usize = 2048;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AlternatingParams<T> {
    pub j_a: T,
    pub j_f: T,
    pub h: T,
    pub t: T,
    /// Brillouin-zone mesh (even, ≥ 256).
    pub n_k: usize,
}

impl<T: Real> AlternatingParams<T> {
    pub fn new(j_a: T, j_f: T, h: T, t: T) -> Result<Self> {
        let p = Self {
            j_a,
            j_f,
            h,
            t,
            n_k: DEFAULT_N_K,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.j_a > T::zero()) || !(self.j_f < T::zero()) {
            return Err(Error::InvalidParameter(format!(
                "need J_a > 0 > J_f, got J_a = {}, J_f = {}",
                self.j_a, self.j_f
            )));
        }
        if !self.h.is_finite() || !self.j_a.is_finite() || !self.j_f.is_finite() {
            return Err(Error::InvalidParameter("couplings and field must be finite".into()));
        }
        if !(self.t > T::zero()) || !self.t.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "temperature {} must be positive",
                self.t
            )));
        }
        if self.n_k < 256 || self.n_k % 2 == 1 {
            return Err(Error::InvalidParameter(format!(
                "k mesh {} must be even and at least 256",
                self.n_k
            )));
        }
        Ok(())
    }

    pub fn at_temperature(&self, t: T) -> Self {
        Self { t, ..*self }
    }
}

/// Zero-temperature field above which the fully polarized state
/// (`d = 1`, `p = 0`) is self-consistent: its upper band,
/// `(J_a + J_f)/2 − h + (|J_a| + |J_f|)/2`, drops below zero.
pub fn saturation_field<T: Real>(j_a: T, j_f: T) -> T {
    (j_a + j_f + j_a.abs() + j_f.abs()) / T::lit(2.0)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeanFieldState<T> {
    pub d_a: T,
    pub d_b: T,
    pub p_ab: Complex<T>,
    pub p_ba: Complex<T>,
    pub converged: bool,
    /// `max |F(v) − v|` of the last map step.
    pub residual: T,
}

impl<T: Real> MeanFieldState<T> {
    /// Symmetry-breaking seed; `p = 0` can be a spurious fixed point.
    pub fn seed() -> Self {
        Self::unconverged(
            T::lit(0.5),
            T::lit(0.5),
            Complex::new(T::lit(0.3), T::zero()),
            Complex::new(T::lit(0.1), T::zero()),
        )
    }

    pub fn unconverged(d_a: T, d_b: T, p_ab: Complex<T>, p_ba: Complex<T>) -> Self {
        Self {
            d_a,
            d_b,
            p_ab,
            p_ba,
            converged: false,
            residual: T::infinity(),
        }
    }

    /// Flat layout `[d_a, d_b, Re p_ab, Im p_ab, Re p_ba, Im p_ba]`, as
    /// carried by [`Error::FixedPointNonConvergence`].
    pub fn to_vec(self) -> Vec<T> {
        vec![
            self.d_a,
            self.d_b,
            self.p_ab.re,
            self.p_ab.im,
            self.p_ba.re,
            self.p_ba.im,
        ]
    }

    /// Inverse of [`to_vec`](Self::to_vec). Panics on fewer than six entries.
    pub fn from_slice(v: &[T]) -> Self {
        Self::unconverged(v[0], v[1], Complex::new(v[2], v[3]), Complex::new(v[4], v[5]))
    }
}

/// Bloch Hamiltonian at momentum `k`.
pub fn hf_hamiltonian_k<T: Real>(state: &MeanFieldState<T>, params: &AlternatingParams<T>, k: T) -> CMatrix<T, 2> {
    let half = T::lit(0.5);
    let sum = params.j_a + params.j_f;
    let phase = Complex::from_polar(T::one(), k * half);
    let off = (Complex::new(half, T::zero()) - state.p_ab) * params.j_a * phase
        + (Complex::new(half, T::zero()) - state.p_ba.conj()) * params.j_f * phase.conj();
    let re = |v: T| Complex::new(v, T::zero());
    [
        [re(sum * (state.d_b - half) - params.h), off],
        [off.conj(), re(sum * (state.d_a - half) - params.h)],
    ]
}

/// Quasiparticle bands `(ε₋, ε₊)` at momentum `k`.
pub fn bands_at<T: Real>(state: &MeanFieldState<T>, params: &AlternatingParams<T>, k: T) -> (T, T) {
    let m = hf_hamiltonian_k(state, params, k);
    let mean = (m[0][0].re + m[1][1].re) / T::lit(2.0);
    let r = band_half_gap(&m);
    (mean - r, mean + r)
}

fn band_half_gap<T: Real>(m: &CMatrix<T, 2>) -> T {
    let diff = (m[0][0].re - m[1][1].re) / T::lit(2.0);
    (diff * diff + m[0][1].norm_sqr()).sqrt()
}

/// One self-consistency step: occupy the bands at temperature `t` and
/// return the recomputed order parameters.
///
/// The occupation matrix `f(H)` of a 2×2 Hermitian `H = m + D` (with
/// `D` traceless, eigenvalues `±r`) is `(f₊ + f₋)/2 + (f₊ − f₋)/(2r)·D`.
/// The zone sum runs in a fixed order so results are reproducible.
pub fn map_step<T: Real>(state: &MeanFieldState<T>, params: &AlternatingParams<T>) -> MeanFieldState<T> {
    let n = params.n_k;
    let nf = T::lit(n as f64);
    let half = T::lit(0.5);
    let mut d_a = T::zero();
    let mut d_b = T::zero();
    let mut p_ab = Complex::new(T::zero(), T::zero());
    let mut p_ba = Complex::new(T::zero(), T::zero());
    for i in 0..n {
        let k = -T::PI() + T::lit(2.0) * T::PI() * T::lit(i as f64) / nf;
        let m = hf_hamiltonian_k(state, params, k);
        let mean = (m[0][0].re + m[1][1].re) * half;
        let diff = (m[0][0].re - m[1][1].re) * half;
        let r = band_half_gap(&m);
        let f_plus = logistic((mean + r) / params.t);
        let f_minus = logistic((mean - r) / params.t);
        let a = (f_plus + f_minus) * half;
        let b = if r > T::epsilon() * (T::one() + mean.abs()) {
            (f_plus - f_minus) / (T::lit(2.0) * r)
        } else {
            // degenerate bands: derivative limit f'(mean)
            -f_plus * (T::one() - f_plus) / params.t
        };
        let back = Complex::from_polar(T::one(), -k * half);
        d_a = d_a + a + b * diff;
        d_b = d_b + a - b * diff;
        p_ab = p_ab + back * m[0][1] * b;
        p_ba = p_ba + back * m[0][1].conj() * b;
    }
    MeanFieldState::unconverged(d_a / nf, d_b / nf, p_ab / nf, p_ba / nf)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeanFieldSolveSpec<T> {
    pub fixed_point: FixedPointSpec<T>,
    /// Times the mixing is halved and the solve restarted on failure.
    pub retries: usize,
    /// A converged state is re-mapped on a doubled mesh; the mesh keeps
    /// doubling (up to `max_n_k`) until the two maps differ by less than this.
    pub mesh_tol: T,
    pub max_n_k: usize,
}

impl<T: Real> Default for MeanFieldSolveSpec<T> {
    fn default() -> Self {
        Self {
            fixed_point: FixedPointSpec::default(),
            retries: 4,
            mesh_tol: T::tol(1e-10),
            max_n_k: 1 << 16,
        }
    }
}

/// Self-consistent state with the default solver settings.
pub fn self_consistent_solve<T: Real>(
    params: &AlternatingParams<T>,
    initial: &MeanFieldState<T>,
) -> Result<MeanFieldState<T>> {
    self_consistent_solve_with(params, initial, &MeanFieldSolveSpec::default()).map(|(state, _)| state)
}

/// Returns the converged state and the mesh it was converged on.
pub fn self_consistent_solve_with<T: Real>(
    params: &AlternatingParams<T>,
    initial: &MeanFieldState<T>,
    spec: &MeanFieldSolveSpec<T>,
) -> Result<(MeanFieldState<T>, usize)> {
    params.validate()?;
    let mut mesh = *params;
    let mut state = solve_at_mesh(&mesh, initial, spec)?;
    loop {
        let finer = AlternatingParams {
            n_k: mesh.n_k * 2,
            ..mesh
        };
        let moved = max_change(&map_step(&state, &finer).to_vec(), &map_step(&state, &mesh).to_vec());
        if moved < spec.mesh_tol || finer.n_k > spec.max_n_k {
            return Ok((state, mesh.n_k));
        }
        mesh = finer;
        state = solve_at_mesh(&mesh, &state, spec)?;
    }
}

fn solve_at_mesh<T: Real>(
    params: &AlternatingParams<T>,
    initial: &MeanFieldState<T>,
    spec: &MeanFieldSolveSpec<T>,
) -> Result<MeanFieldState<T>> {
    let mut fp = spec.fixed_point;
    let start = initial.to_vec();
    let mut attempt = 0;
    loop {
        let solved = fixed_point_solve(
            |v: &[T]| map_step(&MeanFieldState::from_slice(v), params).to_vec(),
            &start,
            &fp,
        );
        match solved {
            Ok(point) => {
                let mut state = MeanFieldState::from_slice(&point.value);
                state.converged = true;
                state.residual = point.residual;
                return Ok(state);
            }
            Err(err @ Error::FixedPointNonConvergence { .. }) if attempt >= spec.retries => return Err(err),
            Err(Error::FixedPointNonConvergence { .. }) => {
                attempt += 1;
                fp.mixing = fp.mixing * T::lit(0.5);
            }
            Err(err) => return Err(err),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BondKind {
    /// Intra-cell `J_a` bond `(aⱼ, bⱼ)`.
    Antiferro,
    /// Inter-cell `J_f` bond `(bⱼ, aⱼ₊₁)`.
    Ferro,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MFResult<T> {
    pub state: MeanFieldState<T>,
    pub params: AlternatingParams<T>,
    pub c_a: ConcurrenceResult<T>,
    pub c_f: ConcurrenceResult<T>,
}

impl<T: Real> MFResult<T> {
    pub fn band_minus(&self, k: T) -> T {
        bands_at(&self.state, &self.params, k).0
    }

    pub fn band_plus(&self, k: T) -> T {
        bands_at(&self.state, &self.params, k).1
    }

    pub fn concurrence(&self, bond: BondKind) -> ConcurrenceResult<T> {
        match bond {
            BondKind::Antiferro => self.c_a,
            BondKind::Ferro => self.c_f,
        }
    }
}

/// Two-site observables of one bond: `Z = p*`, `X⁺ = d_i d_j − |Z|²`,
/// `X⁻ = (1 − d_i)(1 − d_j) − |Z|²`.
///
/// The `b` site of the F bond is followed by the next cell's `a` site,
/// whose density is `d_a` by translation invariance.
pub fn bond_observables<T: Real>(state: &MeanFieldState<T>, bond: BondKind) -> BondObservables<T> {
    let (n_i, n_j, p) = match bond {
        BondKind::Antiferro => (state.d_a, state.d_b, state.p_ab),
        BondKind::Ferro => (state.d_b, state.d_a, state.p_ba),
    };
    let z = p.conj();
    let q2 = z.norm_sqr();
    let (h_i, h_j) = (T::one() - n_i, T::one() - n_j);
    // factored forms stay accurate near full or empty filling
    BondObservables {
        x_plus: n_i * n_j - q2,
        y_plus: n_i * h_j + q2,
        y_minus: h_i * n_j + q2,
        z,
        x_minus: h_i * h_j - q2,
    }
}

pub fn mf_concurrences<T: Real>(state: &MeanFieldState<T>, params: &AlternatingParams<T>) -> Result<MFResult<T>> {
    if !state.converged {
        return Err(Error::InvalidState("mean-field state is not converged".into()));
    }
    Ok(MFResult {
        state: *state,
        params: *params,
        c_a: xstate_concurrence(&bond_observables(state, BondKind::Antiferro))?,
        c_f: xstate_concurrence(&bond_observables(state, BondKind::Ferro))?,
    })
}

/// Residuals of the vanishing-concurrence conditions at a bond, with
/// `q = |p|` the bond amplitude:
///
/// * `simplified`: `d_a − d_a² − (√2 q − q²)`;
/// * `product_symmetric`: `[q² − d_i(d_j − 1)]·[q² − d_j(d_i − 1)] − 2q²`;
/// * `product_literal`: the same with the first bracket squared.
///
/// All three vanish at `c̃ = 0` when `d_a = d_b`; only the symmetric
/// product is exact otherwise.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CriticalIdentity<T> {
    pub simplified: T,
    pub product_symmetric: T,
    pub product_literal: T,
}

pub fn critical_identity<T: Real>(state: &MeanFieldState<T>, bond: BondKind) -> CriticalIdentity<T> {
    let b = bond_observables(state, bond);
    let (d_i, d_j) = (b.n_i(), b.n_j());
    let q = b.z.norm();
    let q2 = q * q;
    let first = q2 - d_i * (d_j - T::one());
    let second = q2 - d_j * (d_i - T::one());
    CriticalIdentity {
        simplified: state.d_a - state.d_a * state.d_a - (T::SQRT_2() * q - q2),
        product_symmetric: first * second - T::lit(2.0) * q2,
        product_literal: first * first - T::lit(2.0) * q2,
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MFCriticalPoint<T> {
    pub t_c: T,
    pub state: MeanFieldState<T>,
    pub identity: CriticalIdentity<T>,
}

/// Converged states along an increasing temperature grid, each solve
/// warm-started from the previous point. Failures are kept in place.
pub fn temperature_sweep<T: Real>(
    params: &AlternatingParams<T>,
    temperatures: &[T],
    initial: &MeanFieldState<T>,
) -> Vec<Result<MeanFieldState<T>>> {
    let mut start = *initial;
    temperatures
        .iter()
        .map(|&t| {
            let solved = self_consistent_solve(&params.at_temperature(t), &start);
            if let Ok(state) = &solved {
                start = *state;
            }
            solved
        })
        .collect()
}

/// Temperature at which the concurrence of `bond` vanishes.
///
/// `c̃(t)` is scanned on a geometric grid over `[0.02, 2]·J_a` with
/// warm starts; the highest downward crossing is refined by Brent.
/// `None` when `c̃ ≤ 0` on the whole scan. `params.t` is ignored.
pub fn mf_critical_temperature<T: Real>(
    params: &AlternatingParams<T>,
    bond: BondKind,
) -> Result<Option<MFCriticalPoint<T>>> {
    params.validate()?;
    let points = 48;
    let (lo, hi) = (T::lit(0.02) * params.j_a, T::lit(2.0) * params.j_a);
    let ratio = (hi / lo).powf(T::one() / T::lit((points - 1) as f64));
    let grid: Vec<T> = (0..points).map(|k| lo * ratio.powi(k as i32)).collect();
    let states = temperature_sweep(params, &grid, &MeanFieldState::seed())
        .into_iter()
        .collect::<Result<Vec<_>>>()?;
    let c_tilde = |state: &MeanFieldState<T>, t: T| -> Result<T> {
        Ok(mf_concurrences(state, &params.at_temperature(t))?
            .concurrence(bond)
            .c_tilde)
    };
    let values = states
        .iter()
        .zip(&grid)
        .map(|(s, &t)| c_tilde(s, t))
        .collect::<Result<Vec<_>>>()?;
    if values[points - 1] > T::zero() {
        return Err(Error::InvalidState(format!(
            "bond still entangled at t = {}",
            grid[points - 1]
        )));
    }
    let Some(k) = (0..points - 1).rev().find(|&k| values[k] > T::zero()) else {
        return Ok(None);
    };
    let mut warm = states[k];
    let t_c = try_find_root_bracketed(
        |t| {
            let state = self_consistent_solve(&params.at_temperature(t), &warm)?;
            warm = state;
            c_tilde(&state, t)
        },
        &RootSpec {
            lo: grid[k],
            hi: grid[k + 1],
            abs_tol: T::tol(1e-12) * params.j_a,
            max_iter: 200,
        },
    )?;
    let state = self_consistent_solve(&params.at_temperature(t_c), &warm)?;
    Ok(Some(MFCriticalPoint {
        t_c,
        state,
        identity: critical_identity(&state, bond),
    }))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(h: f64, t: f64) -> AlternatingParams<f64> {
        AlternatingParams::new(1.0, -1.0, h, t).unwrap()
    }

    #[test]
    fn rejects_bad_params() {
        assert!(AlternatingParams::new(1.0, 0.5, 0.0, 0.1).is_err());
        assert!(AlternatingParams::new(-1.0, -1.0, 0.0, 0.1).is_err());
        assert!(AlternatingParams::new(1.0, -1.0, 0.0, 0.0).is_err());
        let odd = AlternatingParams {
            n_k: 255,
            ..params(0.0, 0.1)
        };
        assert!(odd.validate().is_err());
        let coarse = AlternatingParams {
            n_k: 128,
            ..params(0.0, 0.1)
        };
        assert!(coarse.validate().is_err());
    }

    #[test]
    fn half_filled_uncorrelated_state_is_flat() {
        let s = MeanFieldState::unconverged(0.5, 0.5, Complex::new(0.5, 0.0), Complex::new(0.5, 0.0));
        let p = params(0.3, 0.2);
        for k in [-3.0, -1.0, 0.0, 0.7, 3.1] {
            let m = hf_hamiltonian_k(&s, &p, k);
            assert!(m[0][1].norm() < 1e-15);
            let (lo, hi) = bands_at(&s, &p, k);
            assert!((lo + 0.3).abs() < 1e-15 && (hi + 0.3).abs() < 1e-15);
        }
    }

    #[test]
    fn isolated_dimer_bands() {
        let p = AlternatingParams {
            j_f: -1e-300,
            ..params(0.0, 0.2)
        };
        let s = MeanFieldState::unconverged(0.5, 0.5, Complex::new(-0.2, 0.0), Complex::new(0.0, 0.0));
        let (lo, hi) = bands_at(&s, &p, 0.9);
        assert!((hi - 0.7).abs() < 1e-12 && (lo + 0.7).abs() < 1e-12);
    }

    #[test]
    fn hamiltonian_is_hermitian() {
        let s = MeanFieldState::unconverged(0.3, 0.8, Complex::new(-0.1, 0.05), Complex::new(0.2, -0.3));
        let m = hf_hamiltonian_k(&s, &params(0.4, 0.3), 1.3);
        assert_eq!(m[1][0], m[0][1].conj());
        assert_eq!(m[0][0].im, 0.0);
        assert_eq!(m[1][1].im, 0.0);
    }

    #[test]
    fn infinite_temperature_fixed_point() {
        let s = self_consistent_solve(&params(0.2, 1e6), &MeanFieldState::seed()).unwrap();
        assert!((s.d_a - 0.5).abs() < 1e-6 && (s.d_b - 0.5).abs() < 1e-6);
        assert!(s.p_ab.norm() < 1e-6 && s.p_ba.norm() < 1e-6);
    }

    #[test]
    fn fully_polarized_beyond_saturation() {
        assert_eq!(saturation_field(1.0, -1.0), 1.0);
        let p = params(2.5, 0.01);
        let s = self_consistent_solve(&p, &MeanFieldState::seed()).unwrap();
        assert!((s.d_a - 1.0).abs() < 1e-10 && (s.d_b - 1.0).abs() < 1e-10);
        assert!(s.p_ab.norm() < 1e-10 && s.p_ba.norm() < 1e-10);
        let r = mf_concurrences(&s, &p).unwrap();
        assert_eq!((r.c_a.c, r.c_f.c), (0.0, 0.0));
    }

    #[test]
    fn zero_field_symmetry_emerges() {
        let p = params(0.0, 0.1);
        let s = self_consistent_solve(&p, &MeanFieldState::seed()).unwrap();
        assert!(s.converged && s.residual < 1e-10);
        assert!(s.p_ab.im.abs() < 1e-8 && (s.d_a - s.d_b).abs() < 1e-8);
        let r = mf_concurrences(&s, &p).unwrap();
        assert!(r.c_a.c > 0.0);
        assert_eq!(r.c_f.c, 0.0);
        // re-applying the map barely moves a converged state
        let again = map_step(&s, &p);
        assert!((again.d_a - s.d_a).abs() < 1e-9 && (again.p_ab - s.p_ab).norm() < 1e-9);
        for k in [-2.0, 0.0, 1.5] {
            assert!(r.band_minus(k) <= r.band_plus(k));
        }
    }

    #[test]
    fn unconverged_state_rejected() {
        assert!(mf_concurrences(&MeanFieldState::seed(), &params(0.0, 0.1)).is_err());
    }

    #[test]
    fn identity_forms_agree_for_symmetric_densities() {
        // pick q on the c̃ = 0 surface for d = 0.5: q² − √2 q + 1/4 = 0
        let q = (2f64.sqrt() - 1.0) / 2.0;
        let s = MeanFieldState::unconverged(0.5, 0.5, Complex::new(-q, 0.0), Complex::new(0.0, 0.0));
        let id = critical_identity(&s, BondKind::Antiferro);
        assert!(id.simplified.abs() < 1e-15);
        assert!(id.product_symmetric.abs() < 1e-15);
        assert!(id.product_literal.abs() < 1e-15);
        assert!(
            xstate_concurrence(&bond_observables(&s, BondKind::Antiferro))
                .unwrap()
                .c_tilde
                .abs()
                < 1e-15
        );
    }
}
