//! Command-line front end for `stanley_grid`: sequence generation, grid
//! windows, witnesses, pictures, and the verification harness.

pub mod caps;
pub mod commands;
pub mod harness;
pub mod reference;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("verification failed: {0}")]
    Verification(String),
    #[error("{0}")]
    Bound(String),
    #[error("{0}")]
    Cap(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Verification(_) => 1,
            CliError::Usage(_) => 2,
            CliError::Bound(_) => 3,
            CliError::Cap(_) => 4,
        }
    }
}
