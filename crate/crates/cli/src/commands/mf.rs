use rayon::prelude::*;
use thermal_ent::meanfield_aff::{
    bond_observables, mf_concurrences, mf_critical_temperature, self_consistent_solve, AlternatingParams, BondKind,
    MFCriticalPoint, MeanFieldState, DEFAULT_N_K,
};
use thermal_ent::pairwise::xstate_concurrence;
use thermal_ent::Error;

use super::Report;
use crate::config::{required, MfAffOpts};
use crate::csv::{num, Table};
use crate::error::{CliError, CliResult};
use crate::grid::{dedup_sorted, fields, temperatures};

struct Point {
    t: f64,
    state: MeanFieldState<f64>,
    c_a: f64,
    c_f: f64,
}

fn params(o: &MfAffOpts, h: f64, t: f64) -> CliResult<AlternatingParams<f64>> {
    let p = AlternatingParams {
        n_k: o.n_k.unwrap_or(DEFAULT_N_K),
        ..AlternatingParams::new(o.j_a.unwrap_or(1.0), o.j_f.unwrap_or(-1.0), h, t)?
    };
    p.validate()?;
    Ok(p)
}

/// Pair concurrences of a state that may not be converged; NaN when its
/// observables are not a valid two-site state.
fn raw_concurrences(state: &MeanFieldState<f64>) -> (f64, f64) {
    let c = |bond| xstate_concurrence(&bond_observables(state, bond)).map_or(f64::NAN, |c| c.c);
    (c(BondKind::Antiferro), c(BondKind::Ferro))
}

/// One field, warm-starting each temperature from the last converged state.
fn sweep_field(o: &MfAffOpts, h: f64, ts: &[f64]) -> Vec<Result<Point, CliError>> {
    let mut start = MeanFieldState::seed();
    ts.iter()
        .map(|&t| {
            let p = params(o, h, t)?;
            match self_consistent_solve(&p, &start) {
                Ok(state) => {
                    start = state;
                    let r = mf_concurrences(&state, &p)?;
                    Ok(Point {
                        t,
                        state,
                        c_a: r.c_a.c,
                        c_f: r.c_f.c,
                    })
                }
                Err(Error::FixedPointNonConvergence { state, .. }) => {
                    let state = MeanFieldState::from_slice(&state);
                    let (c_a, c_f) = raw_concurrences(&state);
                    Ok(Point { t, state, c_a, c_f })
                }
                Err(e) => Err(e.into()),
            }
        })
        .collect()
}

pub fn run(o: &MfAffOpts) -> CliResult<Report> {
    let hs = dedup_sorted(fields(&required(&o.h, "h")?)?, "field values");
    for &h in &hs {
        params(o, h, 1.0)?;
    }
    if o.critical {
        return critical(o, &hs);
    }
    let ts = dedup_sorted(temperatures(&required(&o.t, "t")?)?, "temperatures");
    let sweeps: Vec<_> = hs.par_iter().map(|&h| sweep_field(o, h, &ts)).collect();

    let mut report = Report::new(
        Table::new(&[
            "T",
            "h",
            "da",
            "db",
            "pab_re",
            "pab_im",
            "pba_re",
            "pba_im",
            "Ca",
            "Cf",
            "converged",
        ]),
        &o.output,
    );
    let mut unconverged = 0;
    for (&h, sweep) in hs.iter().zip(sweeps) {
        for point in sweep {
            let pt = match point {
                Ok(pt) => pt,
                Err(e) => {
                    report.fail(e);
                    continue;
                }
            };
            let s = pt.state;
            if !s.converged {
                unconverged += 1;
            }
            report.table.row([
                num(pt.t),
                num(h),
                num(s.d_a),
                num(s.d_b),
                num(s.p_ab.re),
                num(s.p_ab.im),
                num(s.p_ba.re),
                num(s.p_ba.im),
                num(pt.c_a),
                num(pt.c_f),
                s.converged.to_string(),
            ]);
        }
    }
    if unconverged > 0 {
        report.fail(CliError::Numerical(format!("{unconverged} points did not converge")));
    }
    Ok(report)
}

fn critical(o: &MfAffOpts, hs: &[f64]) -> CliResult<Report> {
    let results: Vec<_> = hs
        .par_iter()
        .map(|&h| {
            let p = params(o, h, 1.0)?;
            Ok::<_, CliError>((
                mf_critical_temperature(&p, BondKind::Antiferro)?,
                mf_critical_temperature(&p, BondKind::Ferro)?,
            ))
        })
        .collect();
    let mut report = Report::new(
        Table::new(&["h", "Tc_a", "Tc_f", "identity_a", "identity_f"]),
        &o.output,
    );
    for (&h, result) in hs.iter().zip(results) {
        match result {
            Ok((a, f)) => {
                let cell = |cp: &Option<MFCriticalPoint<f64>>, value: fn(&MFCriticalPoint<f64>) -> f64| {
                    cp.as_ref().map_or("absent".to_string(), |c| num(value(c)))
                };
                let tc = |cp: &Option<MFCriticalPoint<f64>>| cell(cp, |c| c.t_c);
                let id = |cp: &Option<MFCriticalPoint<f64>>| cell(cp, |c| c.identity.simplified);
                report.table.row([num(h), tc(&a), tc(&f), id(&a), id(&f)]);
            }
            Err(e) => report.fail(e),
        }
    }
    Ok(report)
}
