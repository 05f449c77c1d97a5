use thiserror::Error;

/// Failure classes, one per process exit code.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("usage: {0}")]
    Usage(String),
    #[error("numerical failure: {0}")]
    Numerical(String),
    #[error("invariant violation: {0}")]
    Invariant(String),
    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),
    /// Already written to stderr where it happened.
    #[error("{0}")]
    Reported(Box<CliError>),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Io(_) => 1,
            CliError::Numerical(_) => 2,
            CliError::Invariant(_) => 3,
            CliError::Reported(inner) => inner.exit_code(),
        }
    }

    /// Keep the more severe of two failures.
    pub fn worst(self, other: CliError) -> CliError {
        if other.exit_code() > self.exit_code() {
            other
        } else {
            self
        }
    }
}

impl From<thermal_ent::Error> for CliError {
    fn from(err: thermal_ent::Error) -> Self {
        match err {
            e if e.is_numerical() => CliError::Numerical(e.to_string()),
            thermal_ent::Error::InvalidState(msg) => CliError::Invariant(msg),
            e => CliError::Usage(e.to_string()),
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;
