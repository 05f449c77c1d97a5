use thermal_ent::witness::{thermal_witness, zero_field_energy_criterion, MacroObservables};

use super::Report;
use crate::config::{required, WitnessOpts};
use crate::csv::{num, Table};
use crate::error::CliResult;

fn verdict(entangled: bool) -> &'static str {
    if entangled {
        "entangled"
    } else {
        "not witnessed"
    }
}

pub fn run(o: &WitnessOpts) -> CliResult<Report> {
    let (u, m, n) = (
        required(&o.u, "u")?,
        required(&o.m, "m")?,
        required(&o.n_sites, "n-sites")?,
    );
    let (j, h) = (o.j.unwrap_or(1.0), o.h.unwrap_or(0.0));
    let obs = if o.spin_energy {
        MacroObservables::from_spin_energy(u, m, n, j, h)?
    } else {
        MacroObservables::new(u, m, n, j, h)?
    };
    let phi = thermal_witness(&obs);
    let energy = if h == 0.0 {
        verdict(zero_field_energy_criterion(obs.u, n, j))
    } else {
        "n/a"
    };
    let mut report = Report::new(Table::new(&["Phi", "verdict", "energy_verdict"]), &o.output);
    report.table.row([num(phi).as_str(), verdict(phi < 0.0), energy]);
    Ok(report)
}
