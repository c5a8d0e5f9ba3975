//! Crate-wide error type.

use thiserror::Error;

/// Errors produced by code construction, encoding, decoding, and simulation.
#[derive(Debug, Error)]
pub enum Error {
    /// A base-graph file line could not be parsed.
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    /// A base graph violated a structural invariant. `rule` names the
    /// invariant that failed, matching the names printed by `validate`.
    #[error("base graph validation failed [{rule}]: {detail}")]
    Validation { rule: &'static str, detail: String },

    /// An invalid configuration value (lifting size, parity rows, shift
    /// network geometry, performance parameters, ...).
    #[error("invalid configuration: {0}")]
    Config(String),

    /// Encoder setup failed, e.g. a singular core parity system.
    #[error("encoder setup failed: {0}")]
    Setup(String),

    /// Mismatched vector lengths or matrix dimensions.
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
