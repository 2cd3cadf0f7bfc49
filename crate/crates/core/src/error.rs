use thiserror::Error;

use crate::VertexSet;

#[derive(Debug, Error)]
pub enum Error {
    #[error("vertex {0} out of range 1..={1}")]
    VertexOutOfRange(u32, usize),
    #[error("empty set not allowed as a generator")]
    EmptyGenerator,
    #[error("{0:?} is not a face of the complex")]
    NotAFace(VertexSet),
    #[error("complex is not pure: facet sizes {0} and {1} both present")]
    NotPure(usize, usize),
    #[error("family members have mixed sizes {0} and {1}")]
    MixedSizes(usize, usize),
    #[error("field characteristic {0} is not prime")]
    NotPrime(u32),
    #[error("resource budget exceeded: {0}")]
    ResourceBudget(String),
    #[error("rejection sampling exhausted {0} retries: {1}")]
    RetryBudget(u64, String),
    #[error("arity {0} exceeds exact-computation budget {1}")]
    ArityBudget(u32, u32),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("function is not monotone: f({0:#x}) = 1 but f({1:#x}) = 0")]
    NotMonotone(u64, u64),
    #[error("internal invariant violated: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
