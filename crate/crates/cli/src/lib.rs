//! Command-line driver for the Darboux-frame library: scene files, the
//! example catalog, and the `analyze`, `classify`, `verify`, `export` and
//! `catalog` commands.

pub mod catalog;
pub mod commands;
pub mod output;
pub mod scene;

use darboux_core::expr::ParseError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{field}: {error}")]
    Parse { field: String, error: ParseError },
    #[error("invalid scene: {0}")]
    Scene(String),
    #[error("{0}")]
    NotSpacelike(String),
    #[error("{0}")]
    Catalog(String),
    #[error("{0}")]
    Usage(String),
    #[error("{path}: {message}")]
    Io { path: String, message: String },
    #[error("DomainViolation: {0}")]
    DomainViolation(String),
    #[error("computation failed: {0}")]
    Compute(String),
}

impl CliError {
    /// 2 for bad input, 1 for anything that went wrong on valid input.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::DomainViolation(_) | CliError::Compute(_) => 1,
            _ => 2,
        }
    }
}
