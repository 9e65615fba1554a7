use thiserror::Error;

use crate::Element;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("element {value} is outside the domain of size {size}")]
    DomainViolation { value: usize, size: usize },

    #[error("domain mismatch: size {left} vs size {right}")]
    DomainMismatch { left: usize, right: usize },

    #[error("arity mismatch: expected {expected}, found {found}")]
    ArityMismatch { expected: usize, found: usize },

    #[error("index {index} out of range 0..{bound}")]
    IndexOutOfRange { index: usize, bound: usize },

    #[error("{what} of size {size} exceeds the configured limit {limit}")]
    ResourceLimit {
        what: &'static str,
        size: u128,
        limit: u128,
    },

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("not a witness for the embedding: {0}")]
    InvalidWitness(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("not a subgroup: {0}")]
    NotSubgroup(String),

    #[error("relation does not determine the term functions at arity {arity}: {detail}")]
    InsufficientRelation { arity: usize, detail: String },

    #[error("representation counterexample: hypotheses hold but F != G ({detail})")]
    RepCounterexample { detail: String },
}

impl Error {
    pub(crate) fn domain(value: Element, size: usize) -> Self {
        Error::DomainViolation {
            value: value as usize,
            size,
        }
    }

    pub(crate) fn limit(what: &'static str, size: u128, limit: usize) -> Self {
        Error::ResourceLimit {
            what,
            size,
            limit: limit as u128,
        }
    }

    pub fn is_resource_limit(&self) -> bool {
        matches!(self, Error::ResourceLimit { .. })
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
