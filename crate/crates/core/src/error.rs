use thiserror::Error;

use crate::galois::CrystallineViolation;
use crate::group::WeylCell;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid context: {0}")]
    Context(String),

    #[error("operands live in different contexts")]
    ContextMismatch,

    #[error("domain error: {0}")]
    Domain(String),

    #[error("division by zero")]
    DivisionByZero,

    #[error("invalid parameter: {0}")]
    Parameter(String),

    #[error("precision exhausted: {0}")]
    Precision(String),

    #[error("factorization failed: {0}")]
    Factorization(String),

    #[error("parameter mismatch: {0}")]
    Mismatch(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("crystalline parameters rejected: {}", display_violations(.0))]
    Crystalline(Vec<CrystallineViolation>),

    #[error("{family} bound violated at index {index} (margin {margin})")]
    BoundViolation {
        family: String,
        index: usize,
        margin: i64,
    },

    #[error("action on the {cell} cell failed: {source}")]
    Cell {
        cell: WeylCell,
        #[source]
        source: Box<Error>,
    },

    #[error("internal invariant violated: {0}")]
    Invariant(String),
}

fn display_violations(v: &[CrystallineViolation]) -> String {
    v.iter()
        .map(|x| x.to_string())
        .collect::<Vec<_>>()
        .join("; ")
}
