pub mod ed;
pub mod mf;
pub mod witness;
pub mod xy;

use std::path::PathBuf;

use crate::csv::Table;
use crate::error::{CliError, CliResult};

/// A finished table plus the worst per-point failure, if any. The table is
/// always written, so failed points stay visible next to the good ones.
pub struct Report {
    pub table: Table,
    pub output: Option<PathBuf>,
    pub failure: Option<CliError>,
}

impl Report {
    pub fn new(table: Table, output: &Option<PathBuf>) -> Self {
        Self {
            table,
            output: output.clone(),
            failure: None,
        }
    }

    pub fn fail(&mut self, err: CliError) {
        eprintln!("error: {err}");
        self.failure = Some(match self.failure.take() {
            Some(prev) => prev.worst(err),
            None => err,
        });
    }

    pub fn finish(self) -> CliResult<()> {
        self.table.emit(self.output.as_deref())?;
        match self.failure {
            Some(err) => Err(CliError::Reported(Box::new(err))),
            None => Ok(()),
        }
    }
}
