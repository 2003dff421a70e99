//! Error type shared across the engine.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// Bad input to an operation (preconditions violated).
    #[error("input error: {0}")]
    Input(String),
    /// Desk-scale size limit exceeded.
    #[error("size limit exceeded: {0}")]
    SizeLimit(String),
    /// A Wedderburn factor has a nontrivial endomorphism field; carries its
    /// degree so the caller can enlarge the ground field.
    #[error("non-split factor with endomorphism field of degree {degree}")]
    SplitFailure { degree: usize },
    /// A linear system had no solution where one was required.
    #[error("no solution: {0}")]
    NoSolution(String),
    /// Internal retry/iteration limit reached; indicates a bug, not data.
    #[error("internal limit: {0}")]
    InternalLimit(String),
    /// Invariant guaranteed by theory failed; indicates a bug, not data.
    #[error("internal invariant violation: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
