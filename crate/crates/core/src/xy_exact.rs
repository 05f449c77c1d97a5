//! Thermodynamic-limit XY chain in a transverse field,
//! `H = Σ J(S⁺ᵢS⁻ᵢ₊₁ + h.c.)/2 − h Σ Sᶻᵢ`.
//!
//! After the Jordan–Wigner and Fourier transforms the chain is a band of
//! free fermions with dispersion `J cos k − h`. Every nearest-neighbour
//! observable reduces to a Fermi integral over `x = cos k`:
//!
//! ```text
//!   ⟨n⟩ = (1/π) ∫₋₁¹ f(x) / √(1−x²) dx
//!   Z   = (1/π) ∫₋₁¹ x f(x) / √(1−x²) dx        f(x) = 1 / (e^{(Jx−h)/T} + 1)
//!   X⁺  = ⟨n⟩² − Z²,   X⁻ = 1 − 2⟨n⟩ + X⁺
//! ```
//!
//! which is exactly the Chebyshev-weighted form handled by
//! [`integrate_chebyshev_weight`].

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::numerics::{
    integrate_chebyshev_weight, quadrature::integrate_minus_ratio, quadrature::integrate_plus_ratio,
    try_find_root_bracketed, QuadratureSpec, RootSpec,
};
use crate::pairwise::{xstate_concurrence, BondObservables, ConcurrenceResult, STATE_TOL};
use crate::scalar::Real;

/// Temperature, with the `T → 0⁺` limit evaluated in closed form.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Temperature<T> {
    Zero,
    Finite(T),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct XYChainParams<T> {
    pub j: T,
    pub h: T,
    pub temperature: Temperature<T>,
}

impl<T: Real> XYChainParams<T> {
    pub fn new(j: T, h: T, t: T) -> Result<Self> {
        let p = Self {
            j,
            h,
            temperature: Temperature::Finite(t),
        };
        p.validate()?;
        Ok(p)
    }

    pub fn ground_state(j: T, h: T) -> Result<Self> {
        let p = Self {
            j,
            h,
            temperature: Temperature::Zero,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.j > T::zero()) || !self.j.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "coupling J = {} must be positive",
                self.j
            )));
        }
        if !self.h.is_finite() {
            return Err(Error::InvalidParameter("field must be finite".into()));
        }
        if let Temperature::Finite(t) = self.temperature {
            if !(t > T::zero()) || !t.is_finite() {
                return Err(Error::InvalidParameter(format!("temperature {t} must be positive")));
            }
        }
        Ok(())
    }

    /// Temperature as a number (`0` for the ground-state limit).
    pub fn t(&self) -> T {
        match self.temperature {
            Temperature::Zero => T::zero(),
            Temperature::Finite(t) => t,
        }
    }

    /// Reduced inverse temperature `βJ` and field `h/J`.
    pub fn reduced(&self) -> (T, T) {
        (self.j / self.t(), self.h / self.j)
    }

    fn with_field(&self, h: T) -> Self {
        Self { h, ..*self }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct XYPointResult<T> {
    pub z: T,
    pub n: T,
    pub x_plus: T,
    pub x_minus: T,
    pub concurrence: ConcurrenceResult<T>,
    pub phi: T,
}

impl<T: Real> XYPointResult<T> {
    pub fn bond_observables(&self) -> BondObservables<T> {
        BondObservables::from_densities(self.n, self.n, self.x_plus, Complex::new(self.z, T::zero()))
    }

    /// Checks the structural invariants of a thermodynamic-limit point.
    pub fn validate(&self, tol: T) -> Result<()> {
        let one = T::one();
        let bad = (self.x_plus - (self.n * self.n - self.z * self.z)).abs() > tol
            || (self.x_minus - (one - T::lit(2.0) * self.n + self.x_plus)).abs() > tol
            || self.n < -tol
            || self.n > one + tol
            || self.z < -one / T::PI() - tol
            || self.z > tol;
        if bad {
            return Err(Error::InvalidState(format!(
                "XY point violates its invariants: {self:?}"
            )));
        }
        Ok(())
    }
}

/// Fermi occupation of the mode at `x = cos k`, overflow-safe.
pub fn fermi_occupation<T: Real>(x: T, params: &XYChainParams<T>) -> T {
    let energy = params.j * x - params.h;
    match params.temperature {
        Temperature::Zero => {
            if energy < T::zero() {
                T::one()
            } else if energy > T::zero() {
                T::zero()
            } else {
                T::lit(0.5)
            }
        }
        Temperature::Finite(t) => logistic(energy / t),
    }
}

/// `1 / (eˣ + 1)` without overflow for either sign of `x`.
pub(crate) fn logistic<T: Real>(x: T) -> T {
    if x > T::zero() {
        let q = (-x).exp();
        q / (T::one() + q)
    } else {
        T::one() / (T::one() + x.exp())
    }
}

/// Ground-state Fermi angle: occupied modes are `θ ∈ (θ_F, π]`.
fn fermi_angle<T: Real>(params: &XYChainParams<T>) -> T {
    (params.h / params.j).max(-T::one()).min(T::one()).acos()
}

/// `⟨c†ᵢ cᵢ₊₁⟩` (real for this model).
pub fn hopping_z<T: Real>(params: &XYChainParams<T>) -> Result<T> {
    hopping_z_with(params, &QuadratureSpec::default())
}

pub fn hopping_z_with<T: Real>(params: &XYChainParams<T>, spec: &QuadratureSpec<T>) -> Result<T> {
    params.validate()?;
    match params.temperature {
        Temperature::Zero => Ok(-fermi_angle(params).sin() / T::PI()),
        Temperature::Finite(_) => {
            let integral = integrate_chebyshev_weight(|x| x * fermi_occupation(x, params), spec)?;
            Ok(integral / T::PI())
        }
    }
}

/// `⟨nᵢ⟩`.
pub fn density_n<T: Real>(params: &XYChainParams<T>) -> Result<T> {
    density_n_with(params, &QuadratureSpec::default())
}

pub fn density_n_with<T: Real>(params: &XYChainParams<T>, spec: &QuadratureSpec<T>) -> Result<T> {
    params.validate()?;
    match params.temperature {
        Temperature::Zero => Ok(T::one() - fermi_angle(params) / T::PI()),
        Temperature::Finite(_) => {
            let integral = integrate_chebyshev_weight(|x| fermi_occupation(x, params), spec)?;
            Ok(integral / T::PI())
        }
    }
}

/// `X⁺ = ⟨nᵢnᵢ₊₁⟩ = ⟨n⟩² − Z²` (Wick factorization of the free band).
pub fn double_occupancy_x_plus<T: Real>(params: &XYChainParams<T>) -> Result<T> {
    double_occupancy_x_plus_with(params, &QuadratureSpec::default())
}

pub fn double_occupancy_x_plus_with<T: Real>(params: &XYChainParams<T>, spec: &QuadratureSpec<T>) -> Result<T> {
    let n = density_n_with(params, spec)?;
    let z = hopping_z_with(params, spec)?;
    x_plus_from(n, z)
}

fn x_plus_from<T: Real>(n: T, z: T) -> Result<T> {
    let x_plus = n * n - z * z;
    if x_plus < -T::tol(STATE_TOL) {
        return Err(Error::InvalidState(format!("X⁺ = {x_plus} is negative")));
    }
    Ok(x_plus)
}

/// `Φ = ⟨n⟩ + √2 Z + Z² − ⟨n⟩²` from already computed `(n, z)`.
pub fn phi_from<T: Real>(n: T, z: T) -> T {
    n + T::SQRT_2() * z + z * z - n * n
}

/// Entanglement indicator: negative exactly when the nearest-neighbour
/// pair is entangled (for `Z ≤ 0`), zero at the critical temperature.
pub fn phi_indicator<T: Real>(params: &XYChainParams<T>) -> Result<T> {
    phi_indicator_with(params, &QuadratureSpec::default())
}

pub fn phi_indicator_with<T: Real>(params: &XYChainParams<T>, spec: &QuadratureSpec<T>) -> Result<T> {
    let n = density_n_with(params, spec)?;
    let z = hopping_z_with(params, spec)?;
    Ok(phi_from(n, z))
}

/// Spin-language form of the entanglement condition:
/// `(⟨S⁺ᵢS⁻ᵢ₊₁⟩ + √2/2)² < 1/4 + ⟨Sᶻ⟩²`.
pub fn spin_condition_entangled<T: Real>(spin_flip: T, magnetization: T) -> bool {
    let lhs = (spin_flip + T::FRAC_1_SQRT_2()).powi(2);
    lhs < T::lit(0.25) + magnetization * magnetization
}

/// Full point evaluation through the X-state concurrence.
pub fn evaluate_point<T: Real>(params: &XYChainParams<T>) -> Result<XYPointResult<T>> {
    evaluate_point_with(params, &QuadratureSpec::default())
}

pub fn evaluate_point_with<T: Real>(params: &XYChainParams<T>, spec: &QuadratureSpec<T>) -> Result<XYPointResult<T>> {
    let n = density_n_with(params, spec)?;
    let z = hopping_z_with(params, spec)?;
    let x_plus = x_plus_from(n, z)?;
    let x_minus = T::one() - T::lit(2.0) * n + x_plus;
    let bond = BondObservables::from_densities(n, n, x_plus, Complex::new(z, T::zero()));
    let concurrence = xstate_concurrence(&bond)?;
    Ok(XYPointResult {
        z,
        n,
        x_plus,
        x_minus,
        concurrence,
        phi: phi_from(n, z),
    })
}

/// Concurrence written directly as three Fermi integrals,
///
/// ```text
/// C̃ = −(2/π) [ I₁ + √(I₊ I₋) · √((I₊/π − 1)(I₋/π − 1)) ]
/// I₁ = ∫ x f/√(1−x²),  I± = ∫ √((1±x)/(1∓x)) f
/// ```
///
/// Independent of [`evaluate_point`]; valid only where `Z ≤ 0`.
pub fn c_tilde_integral_form<T: Real>(params: &XYChainParams<T>) -> Result<T> {
    c_tilde_integral_form_with(params, &QuadratureSpec::default())
}

pub fn c_tilde_integral_form_with<T: Real>(params: &XYChainParams<T>, spec: &QuadratureSpec<T>) -> Result<T> {
    params.validate()?;
    if params.temperature == Temperature::Zero {
        return Err(Error::InvalidParameter(
            "integral form requires a finite temperature".into(),
        ));
    }
    let pi = T::PI();
    let f = |x: T| fermi_occupation(x, params);
    let i1 = integrate_chebyshev_weight(|x| x * f(x), spec)?;
    let i_plus = integrate_plus_ratio(f, spec)?;
    let i_minus = integrate_minus_ratio(f, spec)?;
    let density_part = ((i_plus / pi - T::one()) * (i_minus / pi - T::one())).max(T::zero());
    let pair_part = (i_plus * i_minus).max(T::zero());
    Ok(-(T::lit(2.0) / pi) * (i1 + pair_part.sqrt() * density_part.sqrt()))
}

fn tc_bracket<T: Real>(j: T) -> RootSpec<T> {
    RootSpec {
        lo: T::lit(0.1) * j,
        hi: j,
        abs_tol: T::tol(1e-13) * j,
        max_iter: 200,
    }
}

/// Temperature at which `Φ(T, h) = 0`, searched on `[0.1 J, J]`.
///
/// A missing sign change is reported as [`Error::NoSignChange`]: the pair
/// is then unentangled (or entangled) throughout the bracket.
pub fn critical_temperature<T: Real>(h: T, j: T) -> Result<T> {
    critical_temperature_with(h, j, &QuadratureSpec::default())
}

pub fn critical_temperature_with<T: Real>(h: T, j: T, spec: &QuadratureSpec<T>) -> Result<T> {
    XYChainParams::new(j, h, j)?;
    try_find_root_bracketed(
        |t| phi_indicator_with(&XYChainParams::new(j, h, t)?, spec),
        &tc_bracket(j),
    )
}

/// Zero-field critical temperature from the dedicated equation
/// `(√2 − 1)/2 = (J/πT) ∫₀¹ √(1−x²) / (1 + cosh(Jx/T)) dx`.
///
/// Shares no integrand with [`critical_temperature`]; the two must agree.
pub fn critical_temperature_zero_field<T: Real>(j: T) -> Result<T> {
    critical_temperature_zero_field_with(j, &QuadratureSpec::default())
}

pub fn critical_temperature_zero_field_with<T: Real>(j: T, spec: &QuadratureSpec<T>) -> Result<T> {
    XYChainParams::new(j, T::zero(), j)?;
    let target = (T::SQRT_2() - T::one()) / T::lit(2.0);
    try_find_root_bracketed(
        |t| {
            // even integrand: ∫₀¹ √(1−x²) g = ½ ∫₋₁¹ (1−x²) g / √(1−x²)
            let half_integral =
                integrate_chebyshev_weight(|x| (T::one() - x * x) / (T::one() + (j * x / t).cosh()), spec)?;
            Ok(j / (T::PI() * t) * half_integral / T::lit(2.0) - target)
        },
        &tc_bracket(j),
    )
}

/// Both sides of the field-derivative identity
/// `2(1 + √2 Z) ∂Z/∂h = √2 (2⟨n⟩ − 1) ∂⟨n⟩/∂h` at `T_c(h)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FieldIdentity<T> {
    pub t_c: T,
    pub lhs: T,
    pub rhs: T,
    pub residual: T,
}

/// Evaluates the identity with central differences of step `delta_h`
/// (a default of `1e-5·J` balances truncation and quadrature noise).
pub fn fixed_point_identity_residual<T: Real>(h: T, j: T, delta_h: T) -> Result<FieldIdentity<T>> {
    if !(delta_h > T::zero()) {
        return Err(Error::InvalidParameter(
            "finite-difference step must be positive".into(),
        ));
    }
    let spec = QuadratureSpec::default();
    let t_c = critical_temperature_with(h, j, &spec)?;
    let at = XYChainParams::new(j, h, t_c)?;
    let up = at.with_field(h + delta_h);
    let down = at.with_field(h - delta_h);
    let two = T::lit(2.0);
    let z = hopping_z_with(&at, &spec)?;
    let n = density_n_with(&at, &spec)?;
    let dz = (hopping_z_with(&up, &spec)? - hopping_z_with(&down, &spec)?) / (two * delta_h);
    let dn = (density_n_with(&up, &spec)? - density_n_with(&down, &spec)?) / (two * delta_h);
    let lhs = two * (T::one() + T::SQRT_2() * z) * dz;
    let rhs = T::SQRT_2() * (two * n - T::one()) * dn;
    Ok(FieldIdentity {
        t_c,
        lhs,
        rhs,
        residual: (lhs - rhs).abs(),
    })
}

/// Root of `c̃(T)` on a caller-chosen bracket, for fields where the
/// default `[0.1 J, J]` window does not apply.
pub fn concurrence_root_in<T: Real>(h: T, j: T, lo: T, hi: T) -> Result<T> {
    let spec = QuadratureSpec::default();
    try_find_root_bracketed(
        |t| {
            Ok(evaluate_point_with(&XYChainParams::new(j, h, t)?, &spec)?
                .concurrence
                .c_tilde)
        },
        &RootSpec::bracket(lo, hi),
    )
}
