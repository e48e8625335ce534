use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// Parameter outside the admissible range (q ∈ {0,1}, |q| ≥ 1 where
    /// contractive is required, non-positive radii, off-axis points).
    #[error("domain error: {0}")]
    Domain(String),
    /// An operation's algebraic precondition does not hold for the input.
    #[error("{0}")]
    Precondition(String),
    /// Inputs that do not fit together (mismatched q, free quadruple where a
    /// compatible one is needed, ...).
    #[error("usage error: {0}")]
    Usage(String),
    /// A pair that was expected to be annihilated by the differential is not.
    #[error("not a cocycle: {0}")]
    NotCocycle(String),
    /// An input object violates its own defining relation.
    #[error("validation error: {0}")]
    Validation(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
