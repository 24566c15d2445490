use thiserror::Error;

/// Errors produced by graph loading, pattern parsing, planning, and matching.
#[derive(Debug, Error)]
pub enum Error {
    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("empty graph: input contains no usable edges")]
    EmptyGraph,

    #[error("invalid pattern: {0}")]
    Pattern(String),

    #[error("bad cache file: {0}")]
    Format(String),

    #[error("restriction generation failed: {0}")]
    Generation(String),

    #[error("usage: {0}")]
    Usage(String),

    #[error("count overflow during inclusion-exclusion accumulation")]
    Overflow,

    #[error("internal consistency violation: {0}")]
    Internal(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
