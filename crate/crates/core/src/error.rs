use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("parse error: {0}")]
    Parse(String),
    #[error("unknown object {0:?}")]
    UnknownObject(String),
    #[error("unknown basis element {0:?}")]
    UnknownBasis(String),
    #[error("operands live over different graphs")]
    GraphMismatch,
    #[error("non-composable input: {0}")]
    NotComposable(String),
    #[error("degree mismatch: {0}")]
    Degree(String),
    #[error("weight condition violated: {0}")]
    Weight(String),
    #[error("brace needs at least one argument")]
    EmptyBrace,
    #[error("graph has no unit metadata")]
    MissingUnits,
    #[error("functor mismatch: {0}")]
    FunctorMismatch(String),
    #[error("not a cocycle: {0}")]
    NotCocycle(String),
    #[error("not a Maurer-Cartan element: {0}")]
    NotMaurerCartan(String),
    #[error("element is not invertible")]
    NotInvertible,
    #[error("invalid structure: {0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;
