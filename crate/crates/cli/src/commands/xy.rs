use rayon::prelude::*;
use thermal_ent::xy_exact::{critical_temperature, evaluate_point, XYChainParams};
use thermal_ent::Error;

use super::Report;
use crate::config::{required, XySweepOpts, XyTcOpts};
use crate::csv::{num, Table};
use crate::error::{CliError, CliResult};
use crate::grid::{dedup_sorted, fields, temperatures};

const ROW_TOL: f64 = 1e-9;

fn coupling(j: Option<f64>) -> CliResult<f64> {
    let j = j.unwrap_or(1.0);
    XYChainParams::new(j, 0.0, 1.0)?;
    Ok(j)
}

pub fn sweep(o: &XySweepOpts) -> CliResult<Report> {
    let j = coupling(o.j)?;
    let hs = fields(&required(&o.h, "h")?)?;
    let ts = temperatures(&required(&o.t, "t")?)?;

    let mut points: Vec<(f64, f64)> = hs.iter().flat_map(|&h| ts.iter().map(move |&t| (h, t))).collect();
    let before = points.len();
    points.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.total_cmp(&b.1)));
    points.dedup_by(|a, b| a.0.to_bits() == b.0.to_bits() && a.1.to_bits() == b.1.to_bits());
    if points.len() < before {
        eprintln!("warning: dropped {} duplicate (T, h) points", before - points.len());
    }

    let rows: Vec<_> = points
        .par_iter()
        .map(|&(h, t)| {
            let p = evaluate_point(&XYChainParams::new(j, h, t)?)?;
            p.validate(ROW_TOL)?;
            Ok::<_, Error>(p)
        })
        .collect();

    let mut report = Report::new(
        Table::new(&["T", "h", "C", "Ctilde", "Z", "n", "Xplus", "Xminus", "Phi"]),
        &o.output,
    );
    for (&(h, t), row) in points.iter().zip(rows) {
        match row {
            Ok(p) => report.table.row([
                num(t),
                num(h),
                num(p.concurrence.c),
                num(p.concurrence.c_tilde),
                num(p.z),
                num(p.n),
                num(p.x_plus),
                num(p.x_minus),
                num(p.phi),
            ]),
            Err(e) => report.fail(annotate(e, &format!("T={t}, h={h}"))),
        }
    }
    Ok(report)
}

fn annotate(err: Error, at: &str) -> CliError {
    match CliError::from(err) {
        CliError::Numerical(m) => CliError::Numerical(format!("{at}: {m}")),
        CliError::Invariant(m) => CliError::Invariant(format!("{at}: {m}")),
        CliError::Usage(m) => CliError::Usage(format!("{at}: {m}")),
        other => other,
    }
}

pub fn critical(o: &XyTcOpts) -> CliResult<Report> {
    let j = coupling(o.j)?;
    let tol = o.tol.unwrap_or(1e-6);
    if !(tol > 0.0) {
        return Err(CliError::Usage(format!("tolerance {tol} must be positive")));
    }
    let hs = dedup_sorted(fields(&required(&o.h, "h")?)?, "field values");
    let results: Vec<_> = hs.par_iter().map(|&h| critical_temperature(h, j)).collect();

    let mut report = Report::new(Table::new(&["h", "Tc"]), &o.output);
    let mut found = Vec::new();
    for (&h, result) in hs.iter().zip(results) {
        let cell = match result {
            Ok(tc) => {
                found.push(tc);
                num(tc)
            }
            Err(Error::NoSignChange { .. }) => "absent".to_string(),
            Err(e) => {
                report.fail(annotate(e, &format!("h={h}")));
                num(f64::NAN)
            }
        };
        report.table.row([num(h), cell]);
    }
    if let (Some(lo), Some(hi)) = (
        found.iter().copied().reduce(f64::min),
        found.iter().copied().reduce(f64::max),
    ) {
        let spread = hi - lo;
        eprintln!("max spread of Tc over fields: {}", num(spread));
        if spread > tol {
            report.fail(CliError::Invariant(format!(
                "Tc spread {} exceeds tolerance {}",
                num(spread),
                num(tol)
            )));
        }
    }
    Ok(report)
}
