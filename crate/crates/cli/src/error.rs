//! Two failure classes with distinct exit codes: configuration problems
//! (bad flags, malformed config or field files) exit with 2 before any
//! computation runs; numeric failures (a simulation that cannot deliver
//! its result, unwritable outputs) exit with 3, after writing whatever
//! outputs already exist.

use std::fmt;

#[derive(Debug)]
pub enum CliError {
    Config(String),
    Numeric(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Numeric(_) => 3,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Config(msg) => write!(f, "configuration error: {msg}"),
            CliError::Numeric(msg) => write!(f, "numeric failure: {msg}"),
        }
    }
}

impl From<pmqoc_core::Error> for CliError {
    fn from(e: pmqoc_core::Error) -> Self {
        CliError::Numeric(e.to_string())
    }
}
