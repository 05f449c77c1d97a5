//! Command-line front end: sweeps and critical-temperature solves that
//! write deterministic CSV for external plotting.
//!
//! Every subcommand reads its parameters from flags, from a table of the
//! same name in a TOML file passed with `--config`, or both (flags win).
//! Exit codes: 0 success, 1 usage error, 2 numerical failure, 3 invariant
//! violation. Grid points run on a pool of `THERMAL_ENT_WORKERS` threads
//! (default: available parallelism); output order never depends on it.

pub mod commands;
pub mod config;
pub mod csv;
pub mod error;
pub mod grid;

use std::ffi::OsString;
use std::path::PathBuf;

use clap::error::ErrorKind;
use clap::{Parser, Subcommand};

pub use commands::Report;
pub use config::{EdOpts, MfAffOpts, WitnessOpts, XySweepOpts, XyTcOpts};
pub use error::{CliError, CliResult};

pub const WORKERS_ENV: &str = "THERMAL_ENT_WORKERS";

#[derive(Debug, Parser)]
#[command(
    name = "thermal-ent",
    version,
    about = "Thermal pair entanglement of spin-1/2 chains"
)]
pub struct Cli {
    /// TOML file with per-command tables ([xy-sweep], [ed], ...); flags override it
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Exact infinite XY chain on a (T, h) grid
    XySweep(XySweepOpts),
    /// Critical temperature of the infinite XY chain per field
    XyTc(XyTcOpts),
    /// Entanglement witness from energy and magnetization
    Witness(WitnessOpts),
    /// Exact diagonalization of a finite chain (N <= 14)
    Ed(EdOpts),
    /// Mean-field AF-F alternating chain
    MfAff(MfAffOpts),
}

fn worker_count() -> CliResult<usize> {
    match std::env::var(WORKERS_ENV) {
        Ok(s) => match s.trim().parse::<usize>() {
            Ok(n) if n > 0 => Ok(n),
            _ => Err(CliError::Usage(format!(
                "{WORKERS_ENV}={s:?} is not a positive integer"
            ))),
        },
        Err(_) => Ok(std::thread::available_parallelism().map_or(1, |n| n.get())),
    }
}

fn execute(cli: Cli) -> CliResult<()> {
    let file = match &cli.config {
        Some(path) => config::ConfigFile::load(path)?,
        None => config::ConfigFile::default(),
    };
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(worker_count()?)
        .build()
        .map_err(|e| CliError::Usage(e.to_string()))?;
    let report = pool.install(|| match cli.command {
        Command::XySweep(o) => commands::xy::sweep(&o.merge(file.xy_sweep)),
        Command::XyTc(o) => commands::xy::critical(&o.merge(file.xy_tc)),
        Command::Witness(o) => commands::witness::run(&o.merge(file.witness)),
        Command::Ed(o) => commands::ed::run(&o.merge(file.ed)),
        Command::MfAff(o) => commands::mf::run(&o.merge(file.mf_aff)),
    })?;
    report.finish()
}

/// Parses `args` (program name first) and runs; returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp
                | ErrorKind::DisplayVersion
                | ErrorKind::DisplayHelpOnMissingArgumentOrSubcommand => 0,
                _ => 1,
            };
        }
    };
    match execute(cli) {
        Ok(()) => 0,
        Err(e) => {
            if !matches!(e, CliError::Reported(_)) {
                eprintln!("error: {e}");
            }
            e.exit_code()
        }
    }
}
