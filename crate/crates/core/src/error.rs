//! Error type shared by all modules.

use thiserror::Error;

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("vector does not lie in the lattice: {0}")]
    NotInLattice(String),
    #[error("sublattice is not contained in the ambient one: {0}")]
    NotSublattice(String),
    #[error("sublattice is not saturated: {0}")]
    NotSaturated(String),
    #[error("the generating vectors do not span the full lattice Z^p")]
    NotSurjective,
    #[error("incompatible character presentations: {0}")]
    IncompatiblePresentation(String),
    #[error("not a sub-translate: {0}")]
    NotSubtranslate(String),
    #[error("zero polynomial")]
    ZeroPolynomial,
    #[error("division by zero")]
    DivisionByZero,
    #[error("precision cap reached before the comparison could be decided")]
    PrecisionExhausted,
}

pub type Result<T> = std::result::Result<T, Error>;
