//! Error types shared across the crate.

use thiserror::Error;

/// Errors raised by the library API.
#[derive(Debug, Error)]
pub enum Error {
    /// Invalid variable context (duplicate names, bad identifiers, ...).
    #[error("invalid context: {0}")]
    BadContext(String),

    /// Two values from different contexts were combined.
    #[error("context mismatch: {0}")]
    ContextMismatch(String),

    /// Syntax error while parsing a potential expression.
    #[error("parse error at line {line}, column {col}: {msg}")]
    Parse { line: usize, col: usize, msg: String },

    /// The input violates a precondition (e.g. a potential with linear terms).
    #[error("invalid input: {0}")]
    BadInput(String),

    /// The computation was refused (e.g. GV invariants of an
    /// infinite-dimensional algebra, or a memory cap was exceeded).
    #[error("computation refused: {0}")]
    Refused(String),
}
