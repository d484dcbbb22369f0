use thiserror::Error;

use crate::oracle::ElementId;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("weak oracle queried with a set of size {size}, limit is {limit}")]
    OracleMode { size: usize, limit: usize },

    #[error("instance too large for exhaustive search: C({n}, {k}) = {count} exceeds {limit}")]
    SizeGuard { n: usize, k: usize, count: u128, limit: u128 },

    #[error("element {id} out of range for ground set of size {n}")]
    ElementOutOfRange { id: u32, n: usize },

    #[error("principal submatrix is not positive definite for subset {subset:?}")]
    NotPositiveDefinite { subset: Vec<ElementId> },

    #[error("parse error on line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("memory budget exceeded at stream step {step}: {live} live elements, budget {budget}")]
    BudgetExceeded { step: usize, live: usize, budget: usize },

    #[error("malformed history: {0}")]
    MalformedHistory(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
