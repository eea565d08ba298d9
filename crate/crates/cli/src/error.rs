use std::fmt;

use ahg_core::Error;

/// A failed job, carrying the process exit code it maps to.
#[derive(Debug)]
pub enum CliError {
    /// Bad flags, unreadable or malformed input, inconsistent dimensions.
    Usage(String),
    /// The inputs are well formed but the mathematics is undefined for them.
    Domain(String),
    /// A verification suite ran and at least one check failed.
    Failed(usize),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Domain(_) => 3,
            CliError::Failed(_) => 1,
        }
    }

    pub fn usage(msg: impl Into<String>) -> Self {
        CliError::Usage(msg.into())
    }

    /// Classifies a core error raised while validating user input.
    pub fn input(e: Error) -> Self {
        CliError::Usage(e.to_string())
    }

    /// Classifies a core error raised during the computation itself.
    pub fn math(e: Error) -> Self {
        match e {
            Error::Parse(_) | Error::DimensionMismatch { .. } | Error::NotSquare { .. } | Error::DimensionTooLarge(_) => {
                CliError::Usage(e.to_string())
            }
            _ => CliError::Domain(e.to_string()),
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "usage error: {m}"),
            CliError::Domain(m) => write!(f, "domain error: {m}"),
            CliError::Failed(k) => write!(f, "{k} check(s) failed"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Usage(format!("I/O: {e}"))
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        CliError::Usage(format!("CSV: {e}"))
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Usage(format!("JSON: {e}"))
    }
}

pub type CliResult<T> = Result<T, CliError>;
