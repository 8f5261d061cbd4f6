use thiserror::Error;

/// Error type shared by every module of the engine.
///
/// The CLI maps these onto process exit codes, so the split is coarse on
/// purpose: what went wrong matters more than where.
#[derive(Debug, Error)]
pub enum Error {
    /// Input text does not match the diagram / word / rule-file grammar.
    #[error("parse error: {0}")]
    Parse(String),
    /// Structurally valid input that violates a semantic precondition
    /// (duplicate endpoint, non-permutation heights, move not applicable, ...).
    #[error("domain error: {0}")]
    Domain(String),
    /// A chord or letter index out of range.
    #[error("index error: {0}")]
    Index(String),
    /// A configured cap was exceeded (enumeration size, search budget,
    /// combing blowup).
    #[error("resource limit exceeded: {0}")]
    Resource(String),
    /// Missing or malformed configuration, e.g. no rewrite rule loaded.
    #[error("config error: {0}")]
    Config(String),
    /// Two independent computations of the same quantity disagreed.
    /// This is always a bug somewhere; it is never swallowed.
    #[error("oracle mismatch: {0}")]
    OracleMismatch(String),
}

pub type Result<T> = std::result::Result<T, Error>;
