//! Crate-wide error type.
//!
//! Structural problems (dangling ids, malformed documents) are kept apart
//! from mathematical law violations: a law violation is reported through
//! [`crate::fincat::LawViolation`] or [`crate::laws::LawReport`], never
//! through this enum. Capacity and search-budget exhaustion also get their
//! own variants so callers can map them to distinct exit codes.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// An id referenced something that does not exist (dangling object,
    /// morphism, element or concept reference).
    #[error("structural error: {0}")]
    Structural(String),

    /// An input value failed a precondition (endpoint mismatch, variance
    /// mismatch, functor-law failure on an input diagram).
    #[error("invalid input: {0}")]
    Invalid(String),

    /// A table or enumeration exceeded a configured cap.
    #[error("capacity exceeded: {0}")]
    Capacity(String),

    /// A backtracking search exhausted its node budget. This is a hard
    /// error, never a verdict: "absent" must mean proven absent.
    #[error("search budget exhausted: {0}")]
    BudgetExhausted(String),

    /// A document failed to parse.
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn structural(msg: impl Into<String>) -> Self {
        Error::Structural(msg.into())
    }

    pub fn invalid(msg: impl Into<String>) -> Self {
        Error::Invalid(msg.into())
    }

    pub fn capacity(msg: impl Into<String>) -> Self {
        Error::Capacity(msg.into())
    }

    pub fn budget(msg: impl Into<String>) -> Self {
        Error::BudgetExhausted(msg.into())
    }

    pub fn parse(msg: impl Into<String>) -> Self {
        Error::Parse(msg.into())
    }
}
