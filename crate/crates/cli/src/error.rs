//! Error classification for the exit-code contract:
//! 0 success, 1 invariant breach, 2 usage/validation, 3 I/O.

use std::fmt;

#[derive(Debug)]
pub enum CliError {
    /// Malformed arguments, out-of-range numbers, bad function specs.
    Usage(String),
    /// A computed residual exceeded its tolerance.
    Invariant(String),
    /// Filesystem or serialization failure.
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Invariant(_) => 1,
            CliError::Usage(_) => 2,
            CliError::Io(_) => 3,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "{m}"),
            CliError::Invariant(m) => write!(f, "invariant check failed: {m}"),
            CliError::Io(m) => write!(f, "i/o error: {m}"),
        }
    }
}

impl From<roughsum_core::Error> for CliError {
    fn from(e: roughsum_core::Error) -> Self {
        match e {
            roughsum_core::Error::ToleranceExceeded { .. } => CliError::Invariant(e.to_string()),
            _ => CliError::Usage(e.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

pub type CliResult<T> = Result<T, CliError>;
