//! Per-command options, shared between flags and the TOML config file.

use std::path::{Path, PathBuf};

use clap::{Args, ValueEnum};
use serde::Deserialize;

use crate::error::{CliError, CliResult};
use crate::grid::Grid;

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    #[serde(default, rename = "xy-sweep")]
    pub xy_sweep: XySweepOpts,
    #[serde(default, rename = "xy-tc")]
    pub xy_tc: XyTcOpts,
    #[serde(default)]
    pub witness: WitnessOpts,
    #[serde(default)]
    pub ed: EdOpts,
    #[serde(default, rename = "mf-aff")]
    pub mf_aff: MfAffOpts,
}

impl ConfigFile {
    pub fn load(path: &Path) -> CliResult<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))?;
        toml::from_str(&text).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))
    }
}

// Flag values win over file values; switches are on if set in either.
macro_rules! merge_with_file {
    ($ty:ident { $($field:ident),* } $(switches { $($switch:ident),* })?) => {
        impl $ty {
            pub fn merge(self, file: Self) -> Self {
                Self {
                    $($field: self.$field.or(file.$field),)*
                    $($($switch: self.$switch || file.$switch,)*)?
                }
            }
        }
    };
}

#[derive(Debug, Clone, Default, Args, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "kebab-case")]
pub struct XySweepOpts {
    /// Coupling J [default: 1]
    #[arg(long)]
    pub j: Option<f64>,
    /// Fields: "0,0.5,1" or "start:stop:step"
    #[arg(long, allow_hyphen_values = true)]
    pub h: Option<Grid>,
    /// Temperatures: "0.1,0.2" or "start:stop:step"
    #[arg(long)]
    pub t: Option<Grid>,
    /// Write CSV here instead of stdout
    #[arg(long)]
    pub output: Option<PathBuf>,
}
merge_with_file!(XySweepOpts { j, h, t, output });

#[derive(Debug, Clone, Default, Args, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "kebab-case")]
pub struct XyTcOpts {
    /// Coupling J [default: 1]
    #[arg(long)]
    pub j: Option<f64>,
    /// Fields: "0,0.5,1" or "start:stop:step"
    #[arg(long, allow_hyphen_values = true)]
    pub h: Option<Grid>,
    /// Largest spread of T_c over the fields accepted as field-independent [default: 1e-6]
    #[arg(long)]
    pub tol: Option<f64>,
    #[arg(long)]
    pub output: Option<PathBuf>,
}
merge_with_file!(XyTcOpts { j, h, tol, output });

#[derive(Debug, Clone, Default, Args, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "kebab-case")]
pub struct WitnessOpts {
    /// Internal energy U (extensive)
    #[arg(long, allow_hyphen_values = true)]
    pub u: Option<f64>,
    /// Total magnetization M
    #[arg(long, allow_hyphen_values = true)]
    pub m: Option<f64>,
    /// Number of sites N
    #[arg(long)]
    pub n_sites: Option<usize>,
    /// Coupling J [default: 1]
    #[arg(long)]
    pub j: Option<f64>,
    /// Field h [default: 0]
    #[arg(long, allow_hyphen_values = true)]
    pub h: Option<f64>,
    /// U is the spin-Hamiltonian energy <H> rather than the fermion energy
    #[arg(long)]
    #[serde(default)]
    pub spin_energy: bool,
    #[arg(long)]
    pub output: Option<PathBuf>,
}
merge_with_file!(WitnessOpts { u, m, n_sites, j, h, output } switches { spin_energy });

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Model {
    Xy,
    Heisenberg,
    Alternating,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BoundaryArg {
    Open,
    Periodic,
}

/// One bond of a custom chain (config file only).
#[derive(Debug, Clone, Copy, PartialEq, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "kebab-case")]
pub struct BondConfig {
    pub i: usize,
    pub j: usize,
    pub j_xy: f64,
    pub j_z: f64,
}

#[derive(Debug, Clone, Default, Args, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "kebab-case")]
pub struct EdOpts {
    /// Chain model [default: xy]; ignored when the config file lists bonds
    #[arg(long, value_enum)]
    pub model: Option<Model>,
    /// Number of sites (2..=14)
    #[arg(long)]
    pub n_sites: Option<usize>,
    /// Coupling of the xy and heisenberg models [default: 1]
    #[arg(long, allow_hyphen_values = true)]
    pub j: Option<f64>,
    /// Antiferromagnetic coupling of the alternating model [default: 1]
    #[arg(long, allow_hyphen_values = true)]
    pub j_a: Option<f64>,
    /// Ferromagnetic coupling of the alternating model [default: -1]
    #[arg(long, allow_hyphen_values = true)]
    pub j_f: Option<f64>,
    /// Field h [default: 0]
    #[arg(long, allow_hyphen_values = true)]
    pub h: Option<f64>,
    /// Boundary condition [default: open]
    #[arg(long, value_enum)]
    pub boundary: Option<BoundaryArg>,
    /// Temperatures: "0.1,0.2" or "start:stop:step"
    #[arg(long)]
    pub t: Option<Grid>,
    #[arg(skip)]
    pub bonds: Option<Vec<BondConfig>>,
    /// Report the critical temperature of every bond instead of a sweep
    #[arg(long)]
    #[serde(default)]
    pub critical: bool,
    #[arg(long)]
    pub output: Option<PathBuf>,
}
merge_with_file!(EdOpts { model, n_sites, j, j_a, j_f, h, boundary, t, bonds, output } switches { critical });

#[derive(Debug, Clone, Default, Args, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "kebab-case")]
pub struct MfAffOpts {
    /// Antiferromagnetic coupling [default: 1]
    #[arg(long, allow_hyphen_values = true)]
    pub j_a: Option<f64>,
    /// Ferromagnetic coupling [default: -1]
    #[arg(long, allow_hyphen_values = true)]
    pub j_f: Option<f64>,
    /// Fields: "0,0.5,1" or "start:stop:step"
    #[arg(long, allow_hyphen_values = true)]
    pub h: Option<Grid>,
    /// Temperatures: "0.1,0.2" or "start:stop:step"
    #[arg(long)]
    pub t: Option<Grid>,
    /// Brillouin-zone mesh [default: 2048]
    #[arg(long)]
    pub n_k: Option<usize>,
    /// Report the critical temperatures of both bonds per field instead of a sweep
    #[arg(long)]
    #[serde(default)]
    pub critical: bool,
    #[arg(long)]
    pub output: Option<PathBuf>,
}
merge_with_file!(MfAffOpts { j_a, j_f, h, t, n_k, output } switches { critical });

/// A required option, or a usage error naming it.
pub fn required<T: Clone>(value: &Option<T>, name: &str) -> CliResult<T> {
    value
        .clone()
        .ok_or_else(|| CliError::Usage(format!("missing --{name} (flag or config file)")))
}
