//! Exact diagonalization of short spin-1/2 chains (N ≤ 14).
//!
//! Each bond contributes `j_xy (SˣSˣ + SʸSʸ) + j_z SᶻSᶻ`, and a uniform field
//! adds `−h Σ Sᶻ`. Every coupling conserves total `Sᶻ`, so the Hilbert space
//! splits into `N + 1` magnetization sectors; blocking by sector is an
//! optimization only and can be switched off to check it.
//!
//! States are bit strings with bit `k` set when site `k` is ↑.
//!
//! Thermal averages only need, per eigenstate, its energy, its
//! magnetization and its two-site reduced matrices. [`ChainSpectrum`]
//! computes these once and discards the eigenvectors, so temperature
//! sweeps (and, with blocking, field sweeps) reuse one diagonalization.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::linalg::{zero_matrix, CMatrix};
use crate::numerics::{try_find_root_bracketed, RootSpec};
use crate::pairwise::{
    basis_index, wootters_concurrence, xstate_concurrence, BondObservables, ConcurrenceResult, TwoQubitDensityMatrix,
};
use crate::scalar::Real;

pub const MAX_SITES: usize = 14;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Boundary {
    #[default]
    Open,
    Periodic,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bond<T> {
    pub i: usize,
    pub j: usize,
    pub j_xy: T,
    pub j_z: T,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FiniteChainSpec<T> {
    pub n_sites: usize,
    pub bonds: Vec<Bond<T>>,
    pub h: T,
    pub boundary: Boundary,
}

impl<T: Real> FiniteChainSpec<T> {
    /// Validated spec from an explicit bond list.
    pub fn new(n_sites: usize, bonds: Vec<Bond<T>>, h: T, boundary: Boundary) -> Result<Self> {
        let spec = Self {
            n_sites,
            bonds,
            h,
            boundary,
        };
        spec.validate()?;
        Ok(spec)
    }

    /// Nearest-neighbour chain with bond `k = (k, k+1)`; couplings are
    /// chosen per bond index, the wrap bond `(N−1, 0)` coming last.
    pub fn chain_with(n_sites: usize, h: T, boundary: Boundary, coupling: impl Fn(usize) -> (T, T)) -> Result<Self> {
        let count = match boundary {
            Boundary::Open => n_sites.saturating_sub(1),
            Boundary::Periodic => n_sites,
        };
        let bonds = (0..count)
            .map(|k| {
                let (j_xy, j_z) = coupling(k);
                Bond {
                    i: k,
                    j: (k + 1) % n_sites,
                    j_xy,
                    j_z,
                }
            })
            .collect();
        Self::new(n_sites, bonds, h, boundary)
    }

    /// XY chain, `j_z = 0`.
    pub fn xy_chain(n_sites: usize, j: T, h: T, boundary: Boundary) -> Result<Self> {
        Self::chain_with(n_sites, h, boundary, |_| (j, T::zero()))
    }

    /// Isotropic Heisenberg chain.
    pub fn heisenberg_chain(n_sites: usize, j: T, h: T, boundary: Boundary) -> Result<Self> {
        Self::chain_with(n_sites, h, boundary, |_| (j, j))
    }

    /// Alternating chain: even bonds `(0,1), (2,3), …` carry `j_a`, odd
    /// bonds carry `j_f`.
    pub fn alternating_chain(n_sites: usize, j_a: T, j_f: T, h: T, boundary: Boundary) -> Result<Self> {
        if boundary == Boundary::Periodic && n_sites % 2 == 1 {
            return Err(Error::InvalidParameter(
                "a periodic alternating chain needs an even number of sites".into(),
            ));
        }
        Self::chain_with(
            n_sites,
            h,
            boundary,
            |k| if k % 2 == 0 { (j_a, j_a) } else { (j_f, j_f) },
        )
    }

    pub fn validate(&self) -> Result<()> {
        if !(2..=MAX_SITES).contains(&self.n_sites) {
            return Err(Error::Size { n_sites: self.n_sites });
        }
        if !self.h.is_finite() {
            return Err(Error::InvalidParameter("field must be finite".into()));
        }
        if self.boundary == Boundary::Periodic && self.n_sites < 3 {
            return Err(Error::InvalidParameter(
                "a periodic chain needs at least three sites; use the open pair".into(),
            ));
        }
        let mut seen = Vec::with_capacity(self.bonds.len());
        for b in &self.bonds {
            if b.i >= self.n_sites || b.j >= self.n_sites || b.i == b.j {
                return Err(Error::InvalidParameter(format!(
                    "bond ({}, {}) invalid for {} sites",
                    b.i, b.j, self.n_sites
                )));
            }
            if !b.j_xy.is_finite() || !b.j_z.is_finite() {
                return Err(Error::InvalidParameter("bond couplings must be finite".into()));
            }
            let key = (b.i.min(b.j), b.i.max(b.j));
            if seen.contains(&key) {
                return Err(Error::InvalidParameter(format!("bond {key:?} listed twice")));
            }
            seen.push(key);
        }
        if self.boundary == Boundary::Periodic && !seen.contains(&(0, self.n_sites - 1)) {
            return Err(Error::InvalidParameter(
                "periodic chain is missing its wrap bond".into(),
            ));
        }
        Ok(())
    }

    pub fn dimension(&self) -> usize {
        1 << self.n_sites
    }

    /// The bond joining the two middle sites of an open chain.
    pub fn mid_bond(&self) -> Option<usize> {
        let a = self.n_sites / 2 - 1;
        self.bonds
            .iter()
            .position(|b| (b.i.min(b.j), b.i.max(b.j)) == (a, a + 1))
    }

    /// Largest energy scale, used to size temperature scans.
    pub fn energy_scale(&self) -> T {
        self.bonds
            .iter()
            .fold(self.h.abs(), |s, b| s.max(b.j_xy.abs()).max(b.j_z.abs()))
    }

    /// True when the bond list is invariant under `i → N − 1 − i`.
    pub fn reflection_symmetric(&self) -> bool {
        let n = self.n_sites;
        let key = |b: &Bond<T>| (b.i.min(b.j), b.i.max(b.j));
        self.bonds.iter().all(|b| {
            let mirrored = ((n - 1 - b.i).min(n - 1 - b.j), (n - 1 - b.i).max(n - 1 - b.j));
            self.bonds
                .iter()
                .any(|c| key(c) == mirrored && c.j_xy == b.j_xy && c.j_z == b.j_z)
        })
    }

    fn with_field(&self, h: T) -> Self {
        Self { h, ..self.clone() }
    }
}

fn sz<T: Real>(state: usize, n_sites: usize) -> T {
    let up = state.count_ones() as f64;
    T::lit(up - n_sites as f64 / 2.0)
}

fn bit(state: usize, site: usize) -> bool {
    state >> site & 1 == 1
}

/// Hamiltonian in the computational basis: diagonal plus upper-triangle
/// spin-flip entries `(row, col, value)` with `row < col`.
#[derive(Debug, Clone, PartialEq)]
pub struct SparseHamiltonian<T> {
    pub dim: usize,
    pub diagonal: Vec<T>,
    pub off_diagonal: Vec<(usize, usize, T)>,
}

impl<T: Real> SparseHamiltonian<T> {
    /// Dense `dim × dim` matrix (symmetric, so row- and column-major agree).
    pub fn to_dense(&self) -> Vec<T> {
        let mut m = vec![T::zero(); self.dim * self.dim];
        for (k, &d) in self.diagonal.iter().enumerate() {
            m[k * self.dim + k] = d;
        }
        for &(r, c, v) in &self.off_diagonal {
            m[r * self.dim + c] = m[r * self.dim + c] + v;
            m[c * self.dim + r] = m[c * self.dim + r] + v;
        }
        m
    }

    pub fn apply(&self, psi: &[T]) -> Vec<T> {
        let mut out: Vec<T> = self.diagonal.iter().zip(psi).map(|(&d, &x)| d * x).collect();
        for &(r, c, v) in &self.off_diagonal {
            out[r] = out[r] + v * psi[c];
            out[c] = out[c] + v * psi[r];
        }
        out
    }
}

pub fn build_hamiltonian<T: Real>(spec: &FiniteChainSpec<T>) -> Result<SparseHamiltonian<T>> {
    spec.validate()?;
    let dim = spec.dimension();
    let mut diagonal = vec![T::zero(); dim];
    let mut off_diagonal = Vec::new();
    for state in 0..dim {
        for_each_element(spec, state, |row, value| {
            if row == state {
                diagonal[state] = value;
            } else if state < row {
                off_diagonal.push((state, row, value));
            }
        });
    }
    Ok(SparseHamiltonian {
        dim,
        diagonal,
        off_diagonal,
    })
}

/// Real two-site reduced matrix of one eigenstate, `ρ[α][α'] = Σ_r ψ(α,r) ψ(α',r)`.
type PairMatrix<T> = [[T; 4]; 4];

/// Per-eigenstate data needed for thermal averages.
#[derive(Debug, Clone)]
struct Level<T> {
    energy: T,
    magnetization: T,
    pairs: Vec<PairMatrix<T>>,
}

/// Spectrum of a chain with everything thermal averages need.
#[derive(Debug, Clone)]
pub struct ChainSpectrum<T> {
    spec: FiniteChainSpec<T>,
    blocked: bool,
    levels: Vec<Level<T>>,
}

impl<T: Real> ChainSpectrum<T> {
    /// Sector-blocked diagonalization.
    pub fn new(spec: &FiniteChainSpec<T>) -> Result<Self> {
        Self::with_blocking(spec, true)
    }

    pub fn with_blocking(spec: &FiniteChainSpec<T>, blocked: bool) -> Result<Self> {
        let levels = if blocked {
            blocked_levels(spec)?
        } else {
            unblocked_levels(spec)?
        };
        Ok(Self {
            spec: spec.clone(),
            blocked,
            levels,
        })
    }

    pub fn spec(&self) -> &FiniteChainSpec<T> {
        &self.spec
    }

    pub fn is_blocked(&self) -> bool {
        self.blocked
    }

    /// Energies in ascending order at the spectrum's field.
    pub fn energies(&self) -> Vec<T> {
        let mut e: Vec<T> = self.levels.iter().map(|l| l.energy).collect();
        e.sort_by(|a, b| a.partial_cmp(b).unwrap_or(std::cmp::Ordering::Equal));
        e
    }

    /// Same chain at another field. Blocked spectra shift each sector by
    /// `−Δh·M`; unblocked ones are rediagonalized.
    pub fn at_field(&self, h: T) -> Result<Self> {
        let spec = self.spec.with_field(h);
        if !self.blocked {
            return Self::with_blocking(&spec, false);
        }
        spec.validate()?;
        let dh = h - self.spec.h;
        let levels = self
            .levels
            .iter()
            .map(|l| Level {
                energy: l.energy - dh * l.magnetization,
                ..l.clone()
            })
            .collect();
        Ok(Self {
            spec,
            blocked: true,
            levels,
        })
    }

    /// Boltzmann weights `e^{−(E−E_min)/t}` and `ln Z`.
    fn weights(&self, t: T) -> Result<(Vec<T>, T, T)> {
        if !(t > T::zero()) || !t.is_finite() {
            return Err(Error::InvalidParameter(format!("temperature {t} must be positive")));
        }
        let e_min = self.levels.iter().fold(T::infinity(), |m, l| m.min(l.energy));
        let raw: Vec<T> = self.levels.iter().map(|l| (-(l.energy - e_min) / t).exp()).collect();
        let total: T = raw.iter().copied().sum();
        let log_z = total.ln() - e_min / t;
        Ok((raw, total, log_z))
    }

    /// `ln Z` alone (for finite-difference checks).
    pub fn partition_log(&self, t: T) -> Result<T> {
        Ok(self.weights(t)?.2)
    }

    /// Thermal two-site matrix of one bond.
    pub fn bond_density_matrix(&self, t: T, bond_index: usize) -> Result<TwoQubitDensityMatrix<T>> {
        self.check_bond(bond_index)?;
        let (raw, total, _) = self.weights(t)?;
        Ok(self.average_pair(&raw, total, bond_index))
    }

    pub fn thermal(&self, t: T) -> Result<ThermalEDResult<T>> {
        let (raw, total, partition_log) = self.weights(t)?;
        let mut u = T::zero();
        let mut m = T::zero();
        for (l, &w) in self.levels.iter().zip(&raw) {
            u = u + w * l.energy;
            m = m + w * l.magnetization;
        }
        let reduced: Vec<TwoQubitDensityMatrix<T>> = (0..self.spec.bonds.len())
            .map(|b| self.average_pair(&raw, total, b))
            .collect();
        let per_bond = reduced.iter().map(|r| r.bond_observables()).collect();
        Ok(ThermalEDResult {
            t,
            h: self.spec.h,
            u: u / total,
            m: m / total,
            per_bond,
            reduced,
            partition_log,
        })
    }

    fn check_bond(&self, bond_index: usize) -> Result<()> {
        if bond_index >= self.spec.bonds.len() {
            return Err(Error::InvalidParameter(format!(
                "bond index {bond_index} out of range ({} bonds)",
                self.spec.bonds.len()
            )));
        }
        Ok(())
    }

    fn average_pair(&self, raw: &[T], total: T, bond_index: usize) -> TwoQubitDensityMatrix<T> {
        let mut acc = [[T::zero(); 4]; 4];
        for (l, &w) in self.levels.iter().zip(raw) {
            let p = &l.pairs[bond_index];
            for a in 0..4 {
                for b in 0..4 {
                    acc[a][b] = acc[a][b] + w * p[a][b];
                }
            }
        }
        let mut entries: CMatrix<T, 4> = zero_matrix();
        for a in 0..4 {
            for b in 0..4 {
                entries[a][b] = Complex::new(acc[a][b] / total, T::zero());
            }
        }
        TwoQubitDensityMatrix::from_entries_unchecked(entries)
    }
}

/// Matrix elements `(row, value)` of column `state`, diagonal included.
fn for_each_element<T: Real>(spec: &FiniteChainSpec<T>, state: usize, mut visit: impl FnMut(usize, T)) {
    let quarter = T::lit(0.25);
    let half = T::lit(0.5);
    let mut diagonal = -spec.h * sz::<T>(state, spec.n_sites);
    for b in &spec.bonds {
        if bit(state, b.i) == bit(state, b.j) {
            diagonal = diagonal + b.j_z * quarter;
        } else {
            diagonal = diagonal - b.j_z * quarter;
            if b.j_xy != T::zero() {
                visit(state ^ (1 << b.i) ^ (1 << b.j), b.j_xy * half);
            }
        }
    }
    visit(state, diagonal);
}

/// Reference path: one dense matrix over the full Hilbert space.
fn unblocked_levels<T: Real>(spec: &FiniteChainSpec<T>) -> Result<Vec<Level<T>>> {
    let hamiltonian = build_hamiltonian(spec)?;
    let dim = hamiltonian.dim;
    let dense = hamiltonian.to_dense();
    let states: Vec<usize> = (0..dim).collect();
    let (values, vectors) = T::symmetric_eigen(dim, &dense)?;
    Ok(values
        .iter()
        .enumerate()
        .map(|(k, &energy)| {
            let psi = &vectors[k * dim..(k + 1) * dim];
            let magnetization = psi
                .iter()
                .enumerate()
                .fold(T::zero(), |acc, (s, &a)| acc + a * a * sz::<T>(s, spec.n_sites));
            let pairs = spec
                .bonds
                .iter()
                .map(|b| pair_matrix(psi, &states, &states, b, false))
                .collect();
            Level {
                energy,
                magnetization,
                pairs,
            }
        })
        .collect())
}

/// Sector-resolved path.
///
/// Within a sector, site reflection (when the bond list allows it) and,
/// at zero magnetization, the global spin flip split the block further.
/// Sectors with `M > 0` are not diagonalized at all: the spin flip maps
/// them onto `−M`, which only changes the field energy.
fn blocked_levels<T: Real>(spec: &FiniteChainSpec<T>) -> Result<Vec<Level<T>>> {
    spec.validate()?;
    let n = spec.n_sites;
    let all = (1usize << n) - 1;
    let reflect = |s: usize| s.reverse_bits() >> (usize::BITS as usize - n);
    let flip = |s: usize| s ^ all;
    let symmetric = spec.reflection_symmetric();
    let mut local = vec![0usize; spec.dimension()];
    let mut by_sector: Vec<Vec<Level<T>>> = vec![Vec::new(); n + 1];
    for ups in 0..=n {
        if 2 * ups > n {
            let magnetization = T::lit(ups as f64 - n as f64 / 2.0);
            // E(−M) = E(M) + 2hM with M the mirrored sector's magnetization
            let mirrored = by_sector[n - ups]
                .iter()
                .map(|l| Level {
                    energy: l.energy - T::lit(2.0) * spec.h * magnetization,
                    magnetization,
                    pairs: l.pairs.iter().map(flip_pair).collect(),
                })
                .collect();
            by_sector[ups] = mirrored;
            continue;
        }
        let states: Vec<usize> = (0..spec.dimension())
            .filter(|s| s.count_ones() as usize == ups)
            .collect();
        for (l, &s) in states.iter().enumerate() {
            local[s] = l;
        }
        let mut generators: Vec<&dyn Fn(usize) -> usize> = Vec::new();
        if symmetric {
            generators.push(&reflect);
        }
        if 2 * ups == n {
            generators.push(&flip);
        }
        let magnetization = T::lit(ups as f64 - n as f64 / 2.0);
        let size = states.len();
        let mut levels = Vec::with_capacity(size);
        for basis in symmetry_adapted_bases::<T>(&states, &local, &generators) {
            let dim = basis.len();
            let mut owner: Vec<Option<(usize, T)>> = vec![None; size];
            for (a, v) in basis.iter().enumerate() {
                for &(l, c) in v {
                    owner[l] = Some((a, c));
                }
            }
            let mut block = vec![T::zero(); dim * dim];
            for (b, v) in basis.iter().enumerate() {
                for &(l, cb) in v {
                    for_each_element(spec, states[l], |row, value| {
                        if let Some((a, ca)) = owner[local[row]] {
                            block[b * dim + a] = block[b * dim + a] + ca * value * cb;
                        }
                    });
                }
            }
            let (values, vectors) = T::symmetric_eigen(dim, &block)?;
            let mut psi = vec![T::zero(); size];
            for (k, &energy) in values.iter().enumerate() {
                psi.iter_mut().for_each(|x| *x = T::zero());
                for (a, v) in basis.iter().enumerate() {
                    let amp = vectors[k * dim + a];
                    for &(l, c) in v {
                        psi[l] = psi[l] + amp * c;
                    }
                }
                let pairs = spec
                    .bonds
                    .iter()
                    .map(|b| pair_matrix(&psi, &states, &local, b, true))
                    .collect();
                levels.push(Level {
                    energy,
                    magnetization,
                    pairs,
                });
            }
        }
        by_sector[ups] = levels;
    }
    Ok(by_sector.into_iter().flatten().collect())
}

/// Orthonormal bases of the irreducible blocks of the group generated by
/// commuting involutions, each vector a sparse list `(local index, coeff)`.
fn symmetry_adapted_bases<T: Real>(
    states: &[usize],
    local: &[usize],
    generators: &[&dyn Fn(usize) -> usize],
) -> Vec<Vec<Vec<(usize, T)>>> {
    let k = generators.len();
    let apply = |mask: usize, s: usize| {
        (0..k)
            .filter(|g| mask >> g & 1 == 1)
            .fold(s, |acc, g| generators[g](acc))
    };
    let mut bases = vec![Vec::new(); 1 << k];
    let mut visited = vec![false; states.len()];
    for (l, &s) in states.iter().enumerate() {
        if visited[l] {
            continue;
        }
        let orbit: Vec<usize> = (0..1usize << k).map(|mask| local[apply(mask, s)]).collect();
        for &o in &orbit {
            visited[o] = true;
        }
        for (irrep, basis) in bases.iter_mut().enumerate() {
            let mut coeffs: Vec<(usize, T)> = Vec::with_capacity(orbit.len());
            for (mask, &o) in orbit.iter().enumerate() {
                let sign = if (mask & irrep).count_ones() % 2 == 0 {
                    T::one()
                } else {
                    -T::one()
                };
                match coeffs.iter_mut().find(|(idx, _)| *idx == o) {
                    Some(entry) => entry.1 = entry.1 + sign,
                    None => coeffs.push((o, sign)),
                }
            }
            coeffs.retain(|&(_, c)| c != T::zero());
            let norm = coeffs.iter().fold(T::zero(), |acc, &(_, c)| acc + c * c).sqrt();
            if norm > T::zero() {
                basis.push(coeffs.into_iter().map(|(o, c)| (o, c / norm)).collect());
            }
        }
    }
    bases.retain(|b: &Vec<Vec<(usize, T)>>| !b.is_empty());
    bases
}

/// Reduced matrix of the spin-flipped state: `α → 3 − α` on both indices.
fn flip_pair<T: Real>(p: &PairMatrix<T>) -> PairMatrix<T> {
    std::array::from_fn(|a| std::array::from_fn(|b| p[3 - a][3 - b]))
}

fn pair_matrix<T: Real>(psi: &[T], states: &[usize], local: &[usize], bond: &Bond<T>, blocked: bool) -> PairMatrix<T> {
    let mask = (1 << bond.i) | (1 << bond.j);
    let config_bits = |alpha: usize| -> usize {
        // basis_index: ↑ ↔ 0, so α = 2·(1−bit_i) + (1−bit_j)
        let up_i = alpha < 2;
        let up_j = alpha % 2 == 0;
        (usize::from(up_i) << bond.i) | (usize::from(up_j) << bond.j)
    };
    let mut rho = [[T::zero(); 4]; 4];
    for (l, &s) in states.iter().enumerate() {
        let amp = psi[l];
        if amp == T::zero() {
            continue;
        }
        let alpha = basis_index(bit(s, bond.i), bit(s, bond.j));
        let rest = s & !mask;
        for beta in 0..4 {
            // within one sector only α itself and its ↑↓/↓↑ partner survive
            if blocked && (beta == 0 || beta == 3 || alpha == 0 || alpha == 3) && beta != alpha {
                continue;
            }
            let partner = rest | config_bits(beta);
            rho[alpha][beta] = rho[alpha][beta] + amp * psi[local[partner]];
        }
    }
    rho
}

/// Thermal expectation values of a finite chain at one temperature.
#[derive(Debug, Clone, PartialEq)]
pub struct ThermalEDResult<T> {
    pub t: T,
    pub h: T,
    /// `⟨H⟩`.
    pub u: T,
    /// `Σ⟨Sᶻᵢ⟩`.
    pub m: T,
    /// X-state elements per bond, in the order of `spec.bonds`.
    pub per_bond: Vec<BondObservables<T>>,
    /// Full two-site matrices per bond.
    pub reduced: Vec<TwoQubitDensityMatrix<T>>,
    pub partition_log: T,
}

/// One-shot thermal state; prefer [`ChainSpectrum`] for sweeps.
pub fn thermal_expectations<T: Real>(spec: &FiniteChainSpec<T>, t: T) -> Result<ThermalEDResult<T>> {
    ChainSpectrum::new(spec)?.thermal(t)
}

/// Wootters concurrence of the full reduced matrix of a bond.
pub fn bond_concurrence<T: Real>(result: &ThermalEDResult<T>, bond_index: usize) -> Result<ConcurrenceResult<T>> {
    let rho = result
        .reduced
        .get(bond_index)
        .ok_or_else(|| Error::InvalidParameter(format!("bond index {bond_index} out of range")))?;
    wootters_concurrence(rho)
}

/// X-state fast path for the same bond.
pub fn bond_concurrence_xstate<T: Real>(
    result: &ThermalEDResult<T>,
    bond_index: usize,
) -> Result<ConcurrenceResult<T>> {
    let b = result
        .per_bond
        .get(bond_index)
        .ok_or_else(|| Error::InvalidParameter(format!("bond index {bond_index} out of range")))?;
    xstate_concurrence(b)
}

/// Temperature above which a bond is no longer entangled.
///
/// `c̃(t)` is scanned on a geometric grid from `0.01 S` to `4 S` (`S` the
/// largest coupling or field); the highest downward crossing is refined by
/// Brent. `None` when `c̃ ≤ 0` everywhere on the scan.
pub fn critical_temperature_ed<T: Real>(spectrum: &ChainSpectrum<T>, bond_index: usize) -> Result<Option<T>> {
    spectrum.check_bond(bond_index)?;
    let scale = spectrum.spec.energy_scale();
    if !(scale > T::zero()) {
        return Ok(None);
    }
    let c_tilde = |t: T| -> Result<T> {
        let rho = spectrum.bond_density_matrix(t, bond_index)?;
        Ok(xstate_concurrence(&rho.bond_observables())?.c_tilde)
    };
    let points = 96;
    let (lo, hi) = (T::lit(0.01) * scale, T::lit(4.0) * scale);
    let ratio = (hi / lo).powf(T::one() / T::lit((points - 1) as f64));
    let grid: Vec<T> = (0..points).map(|k| lo * ratio.powi(k as i32)).collect();
    let values = grid.iter().map(|&t| c_tilde(t)).collect::<Result<Vec<T>>>()?;
    if values[points - 1] > T::zero() {
        return Err(Error::InvalidState(format!(
            "bond {bond_index} still entangled at t = {}",
            grid[points - 1]
        )));
    }
    let crossing = (0..points - 1).rev().find(|&k| values[k] > T::zero());
    let Some(k) = crossing else {
        return Ok(None);
    };
    let root = try_find_root_bracketed(
        c_tilde,
        &RootSpec {
            lo: grid[k],
            hi: grid[k + 1],
            abs_tol: T::tol(1e-12) * scale,
            max_iter: 200,
        },
    )?;
    Ok(Some(root))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sorted(mut v: Vec<f64>) -> Vec<f64> {
        v.sort_by(|a, b| a.partial_cmp(b).unwrap());
        v
    }

    #[test]
    fn two_site_xy_levels() {
        let (j, h) = (1.0f64, 0.3);
        let spec = FiniteChainSpec::<f64>::xy_chain(2, j, h, Boundary::Open).unwrap();
        let e = ChainSpectrum::new(&spec).unwrap().energies();
        let expect = sorted(vec![-h, h, j / 2.0, -j / 2.0]);
        for (a, b) in e.iter().zip(&expect) {
            assert!((a - b).abs() < 1e-14);
        }
    }

    #[test]
    fn two_site_heisenberg_levels() {
        let spec = FiniteChainSpec::<f64>::heisenberg_chain(2, 1.0, 0.0, Boundary::Open).unwrap();
        let e = ChainSpectrum::new(&spec).unwrap().energies();
        assert!((e[0] + 0.75).abs() < 1e-14);
        assert!(e[1..].iter().all(|x| (x - 0.25).abs() < 1e-14));
    }

    #[test]
    fn rejects_bad_specs() {
        assert_eq!(
            FiniteChainSpec::<f64>::xy_chain(15, 1.0, 0.0, Boundary::Open).unwrap_err(),
            Error::Size { n_sites: 15 }
        );
        assert!(FiniteChainSpec::<f64>::xy_chain(1, 1.0, 0.0, Boundary::Open).is_err());
        assert!(FiniteChainSpec::<f64>::xy_chain(2, 1.0, 0.0, Boundary::Periodic).is_err());
        assert!(FiniteChainSpec::<f64>::alternating_chain(5, 1.0, -1.0, 0.0, Boundary::Periodic).is_err());
        let dup = vec![
            Bond {
                i: 0,
                j: 1,
                j_xy: 1.0,
                j_z: 0.0,
            },
            Bond {
                i: 1,
                j: 0,
                j_xy: 1.0,
                j_z: 0.0,
            },
        ];
        assert!(FiniteChainSpec::<f64>::new(3, dup, 0.0, Boundary::Open).is_err());
        let no_wrap = vec![
            Bond {
                i: 0,
                j: 1,
                j_xy: 1.0,
                j_z: 0.0,
            },
            Bond {
                i: 1,
                j: 2,
                j_xy: 1.0,
                j_z: 0.0,
            },
        ];
        assert!(FiniteChainSpec::<f64>::new(3, no_wrap, 0.0, Boundary::Periodic).is_err());
    }

    #[test]
    fn two_site_closed_form() {
        let (j, h, t) = (1.0f64, 0.4, 0.37);
        let spec = FiniteChainSpec::<f64>::xy_chain(2, j, h, Boundary::Open).unwrap();
        let r = thermal_expectations(&spec, t).unwrap();
        let z_part = 2.0 * (h / t).cosh() + 2.0 * (j / (2.0 * t)).cosh();
        let expect = 2.0 * ((j / (2.0 * t)).sinh() - 1.0) / z_part;
        let c = bond_concurrence(&r, 0).unwrap();
        assert!((c.c_tilde - expect).abs() < 1e-12);
        assert!((r.partition_log - z_part.ln()).abs() < 1e-12);
    }

    #[test]
    fn hot_pair_is_maximally_mixed() {
        let spec = FiniteChainSpec::<f64>::xy_chain(2, 1.0, 0.2, Boundary::Open).unwrap();
        let r = thermal_expectations(&spec, 1e8).unwrap();
        let e = r.reduced[0].entries();
        for a in 0..4 {
            assert!((e[a][a].re - 0.25).abs() < 1e-8);
        }
        assert_eq!(bond_concurrence(&r, 0).unwrap().c, 0.0);
    }

    #[test]
    fn cold_heisenberg_dimer_is_a_singlet() {
        let spec = FiniteChainSpec::<f64>::heisenberg_chain(2, 1.0, 0.0, Boundary::Open).unwrap();
        let r = thermal_expectations(&spec, 0.01).unwrap();
        // √ρ of a rank-one state limits the general path to ~1e-8
        assert!((bond_concurrence(&r, 0).unwrap().c - 1.0).abs() < 1e-7);
        assert!((bond_concurrence_xstate(&r, 0).unwrap().c - 1.0).abs() < 1e-12);
    }

    #[test]
    fn ferromagnetic_dimer_never_entangled() {
        let spec = FiniteChainSpec::<f64>::heisenberg_chain(2, -1.0, 0.0, Boundary::Open).unwrap();
        assert_eq!(
            critical_temperature_ed(&ChainSpectrum::new(&spec).unwrap(), 0).unwrap(),
            None
        );
    }

    #[test]
    fn two_site_critical_temperature() {
        let expect = 1.0 / (2.0 * (1.0 + 2f64.sqrt()).ln());
        for h in [0.0, 0.7, 1.9] {
            let spec = FiniteChainSpec::<f64>::xy_chain(2, 1.0, h, Boundary::Open).unwrap();
            let tc = critical_temperature_ed(&ChainSpectrum::new(&spec).unwrap(), 0)
                .unwrap()
                .unwrap();
            assert!((tc - expect).abs() < 1e-9, "h={h}: {tc}");
        }
    }

    #[test]
    fn hamiltonian_is_symmetric_and_conserves_sz() {
        let spec = FiniteChainSpec::<f64>::new(
            5,
            vec![
                Bond {
                    i: 0,
                    j: 1,
                    j_xy: 1.0,
                    j_z: 0.3,
                },
                Bond {
                    i: 1,
                    j: 3,
                    j_xy: -0.7,
                    j_z: -0.7,
                },
                Bond {
                    i: 2,
                    j: 4,
                    j_xy: 0.4,
                    j_z: 1.1,
                },
                Bond {
                    i: 3,
                    j: 4,
                    j_xy: 0.9,
                    j_z: 0.0,
                },
            ],
            0.35,
            Boundary::Open,
        )
        .unwrap();
        let h = build_hamiltonian(&spec).unwrap();
        let dense = h.to_dense();
        let d = h.dim;
        let mut comm = 0.0f64;
        for r in 0..d {
            for c in 0..d {
                assert_eq!(dense[r * d + c], dense[c * d + r]);
                let diff = sz::<f64>(c, 5) - sz::<f64>(r, 5);
                comm += (dense[r * d + c] * diff).powi(2);
            }
        }
        assert!(comm.sqrt() < 1e-12);
        // sparse apply agrees with the dense matrix
        let psi: Vec<f64> = (0..d).map(|k| ((k * 7 + 3) % 11) as f64 - 5.0).collect();
        let sparse = h.apply(&psi);
        for r in 0..d {
            let dense_r: f64 = (0..d).map(|c| dense[r * d + c] * psi[c]).sum();
            assert!((dense_r - sparse[r]).abs() < 1e-12);
        }
    }

    #[test]
    fn blocking_is_transparent() {
        let specs = [
            FiniteChainSpec::<f64>::alternating_chain(6, 1.0, -0.8, 0.45, Boundary::Periodic).unwrap(),
            FiniteChainSpec::<f64>::alternating_chain(7, 1.0, -1.0, 0.3, Boundary::Open).unwrap(),
            FiniteChainSpec::<f64>::xy_chain(6, 1.0, 0.2, Boundary::Open).unwrap(),
            FiniteChainSpec::<f64>::heisenberg_chain(5, 0.8, -0.6, Boundary::Periodic).unwrap(),
        ];
        assert!(!specs[1].reflection_symmetric());
        assert!(specs[0].reflection_symmetric() && specs[2].reflection_symmetric());
        for spec in &specs {
            blocking_matches(spec);
        }
    }

    fn blocking_matches(spec: &FiniteChainSpec<f64>) {
        let blocked = ChainSpectrum::with_blocking(spec, true).unwrap();
        let full = ChainSpectrum::with_blocking(spec, false).unwrap();
        assert_eq!(blocked.energies().len(), full.energies().len());
        for (a, b) in blocked.energies().iter().zip(full.energies()) {
            assert!((a - b).abs() < 1e-12);
        }
        for t in [0.1, 0.6, 2.0] {
            let a = blocked.thermal(t).unwrap();
            let b = full.thermal(t).unwrap();
            assert!((a.u - b.u).abs() < 1e-12 && (a.m - b.m).abs() < 1e-12);
            assert!((a.partition_log - b.partition_log).abs() < 1e-12);
            for (ra, rb) in a.reduced.iter().zip(&b.reduced) {
                for i in 0..4 {
                    for j in 0..4 {
                        assert!((ra.entries()[i][j] - rb.entries()[i][j]).norm() < 1e-12);
                    }
                }
                assert!(rb.off_x_weight() < 1e-12);
            }
        }
    }

    #[test]
    fn field_shift_matches_rediagonalization() {
        let spec = FiniteChainSpec::<f64>::heisenberg_chain(6, 1.0, 0.0, Boundary::Open).unwrap();
        let shifted = ChainSpectrum::new(&spec)
            .unwrap()
            .at_field(0.8)
            .unwrap()
            .thermal(0.3)
            .unwrap();
        let direct = thermal_expectations(&spec.with_field(0.8), 0.3).unwrap();
        assert!((shifted.u - direct.u).abs() < 1e-12);
        assert!((shifted.m - direct.m).abs() < 1e-12);
    }

    #[test]
    fn thermodynamic_derivatives() {
        let spec = FiniteChainSpec::<f64>::xy_chain(8, 1.0, 0.3, Boundary::Open).unwrap();
        let spectrum = ChainSpectrum::new(&spec).unwrap();
        let t = 0.4;
        let r = spectrum.thermal(t).unwrap();
        // u = −∂ ln Z / ∂β
        let db = 1e-5;
        let log_z = |beta: f64| spectrum.partition_log(1.0 / beta).unwrap();
        let du = -(log_z(1.0 / t + db) - log_z(1.0 / t - db)) / (2.0 * db);
        assert!((du - r.u).abs() < 1e-6 * r.u.abs().max(1.0));
        // m = t ∂ ln Z / ∂h
        let dh = 1e-5;
        let up = spectrum.at_field(0.3 + dh).unwrap().partition_log(t).unwrap();
        let down = spectrum.at_field(0.3 - dh).unwrap().partition_log(t).unwrap();
        let dm = t * (up - down) / (2.0 * dh);
        assert!((dm - r.m).abs() < 1e-6 * r.m.abs().max(1.0));
    }

    #[test]
    fn wootters_matches_xstate() {
        let spec = FiniteChainSpec::<f64>::alternating_chain(8, 1.0, -1.0, 0.9, Boundary::Open).unwrap();
        let spectrum = ChainSpectrum::new(&spec).unwrap();
        for t in [0.05, 0.2, 0.7] {
            let r = spectrum.thermal(t).unwrap();
            for b in 0..spec.bonds.len() {
                r.per_bond[b].validate().unwrap();
                let full = bond_concurrence(&r, b).unwrap();
                let fast = bond_concurrence_xstate(&r, b).unwrap();
                assert!((full.c_tilde - fast.c_tilde).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn mid_bond_of_open_chain() {
        let spec = FiniteChainSpec::<f64>::xy_chain(8, 1.0, 0.0, Boundary::Open).unwrap();
        assert_eq!(spec.mid_bond(), Some(3));
    }
}
