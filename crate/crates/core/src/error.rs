use thiserror::Error;

/// Errors produced by the tree, measure, oracle and tableau layers.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },

    #[error("vertex {0} is not a last branching vertex")]
    NotLastBranching(usize),

    #[error("marked trees require at least one site (got n = {0})")]
    NoSites(usize),

    #[error("configuration length {got} does not match site count {expected}")]
    LengthMismatch { expected: usize, got: usize },

    #[error("rate {name} = {value} is outside (0, 1]")]
    RateOutOfRange { name: &'static str, value: String },

    #[error("invalid rational {0:?}; expected p/q")]
    BadRational(String),

    #[error("generator kernel is not one-dimensional (n = {0})")]
    DegenerateKernel(usize),

    #[error("simulation needs events > burn_in (events = {events}, burn_in = {burn_in})")]
    EventBudget { events: u64, burn_in: u64 },

    #[error("invalid tableau: {0}")]
    InvalidTableau(String),

    #[error("n = {n} exceeds the enumeration bound ({count} objects > {limit})")]
    TooLarge { n: usize, count: u128, limit: u128 },
}

pub type Result<T> = std::result::Result<T, Error>;
