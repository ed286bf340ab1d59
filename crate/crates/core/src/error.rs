use thiserror::Error;

use crate::quantale::Quantale;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("value `{value}` does not belong to {quantale}")]
    QuantaleMismatch { quantale: Quantale, value: String },

    #[error("relations over different quantales: {0} vs {1}")]
    QuantaleConflict(Quantale, Quantale),

    #[error("invalid quantale: {0}")]
    InvalidQuantale(String),

    #[error("carrier mismatch: expected [{expected}], found [{found}]")]
    CarrierMismatch { expected: String, found: String },

    #[error("shape mismatch: {0}")]
    Shape(String),

    #[error("duplicate label `{0}` in carrier")]
    DuplicateLabel(String),

    #[error("unknown label `{0}`")]
    UnknownLabel(String),

    #[error("map is not total: {0}")]
    NotTotal(String),

    #[error("word of length {length} exceeds the bound {bound}")]
    BoundOverflow { length: usize, bound: usize },

    #[error("capability: {0}")]
    NotEnumerable(&'static str),

    #[error("enumeration too large: {0}")]
    Capacity(String),

    #[error("not a T-functor: {0}")]
    NotFunctor(String),

    #[error("not fully faithful: {0}")]
    NotFullyFaithful(String),

    #[error("not L-separated: {0}")]
    NotSeparated(String),

    #[error("not cocomplete: {0}")]
    NotCocomplete(String),

    #[error("not a right adjoint: {0}")]
    NotRightAdjoint(String),

    #[error("invalid topology: {0}")]
    InvalidTopology(String),

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("parse error: {0}")]
    Parse(String),
}
