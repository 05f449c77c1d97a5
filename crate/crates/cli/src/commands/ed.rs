use rayon::prelude::*;
use thermal_ent::ed_oracle::{
    bond_concurrence_xstate, critical_temperature_ed, Bond, Boundary, ChainSpectrum, FiniteChainSpec,
};
use thermal_ent::{Error, ThermalEDF64};

use super::Report;
use crate::config::{required, BoundaryArg, EdOpts, Model};
use crate::csv::{num, Table};
use crate::error::{CliError, CliResult};
use crate::grid::{dedup_sorted, temperatures};

/// Reduced matrices must be X-shaped for the fast concurrence path.
const OFF_X_TOL: f64 = 1e-10;

fn spec(o: &EdOpts) -> CliResult<FiniteChainSpec<f64>> {
    let n = required(&o.n_sites, "n-sites")?;
    let h = o.h.unwrap_or(0.0);
    let boundary = match o.boundary.unwrap_or(BoundaryArg::Open) {
        BoundaryArg::Open => Boundary::Open,
        BoundaryArg::Periodic => Boundary::Periodic,
    };
    let j = o.j.unwrap_or(1.0);
    let spec = match (&o.bonds, o.model.unwrap_or(Model::Xy)) {
        (Some(bonds), _) => {
            let bonds = bonds
                .iter()
                .map(|b| Bond {
                    i: b.i,
                    j: b.j,
                    j_xy: b.j_xy,
                    j_z: b.j_z,
                })
                .collect();
            FiniteChainSpec::new(n, bonds, h, boundary)
        }
        (None, Model::Xy) => FiniteChainSpec::xy_chain(n, j, h, boundary),
        (None, Model::Heisenberg) => FiniteChainSpec::heisenberg_chain(n, j, h, boundary),
        (None, Model::Alternating) => {
            FiniteChainSpec::alternating_chain(n, o.j_a.unwrap_or(1.0), o.j_f.unwrap_or(-1.0), h, boundary)
        }
    };
    Ok(spec?)
}

pub fn run(o: &EdOpts) -> CliResult<Report> {
    let spec = spec(o)?;
    if o.critical {
        return critical(o, &spec);
    }
    let ts = dedup_sorted(temperatures(&required(&o.t, "t")?)?, "temperatures");
    let spectrum = ChainSpectrum::new(&spec)?;
    let results: Vec<Result<ThermalEDF64, Error>> = ts.par_iter().map(|&t| spectrum.thermal(t)).collect();

    let mut report = Report::new(Table::new(&["T", "U", "M", "bond", "C", "Ctilde", "Z", "n"]), &o.output);
    for (&t, result) in ts.iter().zip(results) {
        let r = match result {
            Ok(r) => r,
            Err(e) => {
                report.fail(CliError::from(e));
                continue;
            }
        };
        for (b, obs) in r.per_bond.iter().enumerate() {
            let row = obs
                .validate()
                .and_then(|_| bond_concurrence_xstate(&r, b))
                .map_err(CliError::from)
                .and_then(|c| {
                    let off = r.reduced[b].off_x_weight();
                    if off > OFF_X_TOL {
                        return Err(CliError::Invariant(format!("bond {b} off-X weight {off:e}")));
                    }
                    Ok(c)
                });
            match row {
                Ok(c) => report.table.row([
                    num(t),
                    num(r.u),
                    num(r.m),
                    b.to_string(),
                    num(c.c),
                    num(c.c_tilde),
                    num(obs.z.re),
                    num((obs.n_i() + obs.n_j()) / 2.0),
                ]),
                Err(e) => report.fail(e),
            }
        }
    }
    Ok(report)
}

fn critical(o: &EdOpts, spec: &FiniteChainSpec<f64>) -> CliResult<Report> {
    let spectrum = ChainSpectrum::new(spec)?;
    let results: Vec<_> = (0..spec.bonds.len())
        .into_par_iter()
        .map(|b| critical_temperature_ed(&spectrum, b))
        .collect();
    let mut report = Report::new(Table::new(&["bond", "i", "j", "Tc"]), &o.output);
    for ((b, bond), result) in spec.bonds.iter().enumerate().zip(results) {
        let cell = match result {
            Ok(Some(tc)) => num(tc),
            Ok(None) => "absent".to_string(),
            Err(e) => {
                report.fail(CliError::from(e));
                num(f64::NAN)
            }
        };
        report
            .table
            .row([b.to_string(), bond.i.to_string(), bond.j.to_string(), cell]);
    }
    Ok(report)
}
