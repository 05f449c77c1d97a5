//! Numeric lists given either explicitly or as `start:stop:step` ranges.

use std::str::FromStr;

use serde::Deserialize;

use crate::error::{CliError, CliResult};

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(untagged)]
pub enum Grid {
    List(Vec<f64>),
    Text(String),
}

impl FromStr for Grid {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let grid = Grid::Text(s.to_string());
        grid.values().map_err(|e| e.to_string())?;
        Ok(grid)
    }
}

impl Grid {
    /// Values in the order given. Ranges include `stop` when it lies on the
    /// step lattice (up to rounding).
    pub fn values(&self) -> CliResult<Vec<f64>> {
        let values = match self {
            Grid::List(v) => v.clone(),
            Grid::Text(s) => parse_text(s)?,
        };
        if let Some(bad) = values.iter().find(|x| !x.is_finite()) {
            return Err(CliError::Usage(format!("non-finite grid value {bad}")));
        }
        Ok(values)
    }
}

fn parse_number(s: &str) -> CliResult<f64> {
    s.trim()
        .parse()
        .map_err(|_| CliError::Usage(format!("not a number: {s:?}")))
}

fn parse_text(s: &str) -> CliResult<Vec<f64>> {
    let s = s.trim();
    if s.is_empty() {
        return Ok(Vec::new());
    }
    if s.contains(':') {
        let parts: Vec<&str> = s.split(':').collect();
        let [start, stop, step] = parts[..] else {
            return Err(CliError::Usage(format!("range {s:?} is not start:stop:step")));
        };
        let (start, stop, step) = (parse_number(start)?, parse_number(stop)?, parse_number(step)?);
        if !(step > 0.0) || !(stop >= start) {
            return Err(CliError::Usage(format!("range {s:?} needs step > 0 and stop >= start")));
        }
        let span = (stop - start) / step;
        let count = (span + 1e-9 * span.max(1.0)).floor() as usize + 1;
        if count > 1_000_000 {
            return Err(CliError::Usage(format!("range {s:?} has {count} points")));
        }
        return Ok((0..count).map(|k| start + step * k as f64).collect());
    }
    s.split(',').map(parse_number).collect()
}

/// Temperatures must be positive and non-decreasing.
pub fn temperatures(grid: &Grid) -> CliResult<Vec<f64>> {
    let t = grid.values()?;
    if t.is_empty() {
        return Err(CliError::Usage("empty temperature grid".into()));
    }
    if let Some(bad) = t.iter().find(|&&x| !(x > 0.0)) {
        return Err(CliError::Usage(format!("temperature {bad} is not positive")));
    }
    if t.windows(2).any(|w| w[1] < w[0]) {
        return Err(CliError::Usage("temperature grid must be increasing".into()));
    }
    Ok(t)
}

/// Fields, sorted; an empty list is a usage error.
pub fn fields(grid: &Grid) -> CliResult<Vec<f64>> {
    let mut h = grid.values()?;
    if h.is_empty() {
        return Err(CliError::Usage("empty field list".into()));
    }
    h.sort_by(f64::total_cmp);
    Ok(h)
}

/// Sorts and removes exact duplicates, warning on stderr when any are dropped.
pub fn dedup_sorted(mut values: Vec<f64>, what: &str) -> Vec<f64> {
    values.sort_by(f64::total_cmp);
    let before = values.len();
    values.dedup_by(|a, b| a.to_bits() == b.to_bits());
    if values.len() < before {
        eprintln!("warning: dropped {} duplicate {what}", before - values.len());
    }
    values
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ranges_include_stop() {
        let v = Grid::Text("0.1:2.0:0.1".into()).values().unwrap();
        assert_eq!(v.len(), 20);
        assert!((v[19] - 2.0).abs() < 1e-12);
        assert_eq!(Grid::Text("0:1:0.3".into()).values().unwrap().len(), 4);
    }

    #[test]
    fn lists_and_errors() {
        assert_eq!(Grid::Text("0, 0.5,1".into()).values().unwrap(), vec![0.0, 0.5, 1.0]);
        assert!(Grid::Text("".into()).values().unwrap().is_empty());
        assert!("1:0:0.1".parse::<Grid>().is_err());
        assert!("a,b".parse::<Grid>().is_err());
        assert!("1:2".parse::<Grid>().is_err());
        assert!(Grid::List(vec![f64::NAN]).values().is_err());
    }

    #[test]
    fn temperature_checks() {
        assert!(temperatures(&Grid::List(vec![0.0, 1.0])).is_err());
        assert!(temperatures(&Grid::List(vec![0.5, 0.2])).is_err());
        assert!(temperatures(&Grid::List(vec![])).is_err());
        assert!(fields(&Grid::List(vec![])).is_err());
        assert_eq!(fields(&Grid::List(vec![1.0, -1.0])).unwrap(), vec![-1.0, 1.0]);
    }
}
