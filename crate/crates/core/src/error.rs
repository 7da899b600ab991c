use thiserror::Error;

/// Errors produced by the gridcover library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("grid is empty")]
    EmptyGrid,

    #[error("domain error: {0}")]
    Domain(String),

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("invariant violated: {0}")]
    Invariant(String),

    #[error("structure is disconnected into {components} components")]
    Disconnected { components: usize },

    #[error("instance too large for the oracle: {candidates} candidates (limit {limit})")]
    OracleTooLarge { candidates: usize, limit: usize },

    #[error("no covering subset of at most {max_size} candidates at spacing {spacing}")]
    OracleInfeasible { max_size: usize, spacing: String },

    #[error("invalid rational literal {0:?}")]
    Rational(String),
}

pub type Result<T> = std::result::Result<T, Error>;
