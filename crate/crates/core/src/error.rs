use thiserror::Error;

use crate::ntheory::{FactorMap, Natural};

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    /// The factorization budget ran out. `partial` holds every prime found so
    /// far and `cofactor` is the composite part that could not be split.
    #[error("factorization budget exceeded: unfactored cofactor {cofactor}")]
    BudgetExceeded { partial: FactorMap, cofactor: Natural },

    /// Sequence generation stopped because the relation value at `step`
    /// could not be factored within budget.
    #[error("step {step}: factorization budget exceeded on cofactor {cofactor}")]
    StepBudgetExceeded { step: usize, partial: FactorMap, cofactor: Natural },

    #[error("target {0} already occurs among the known terms")]
    TargetAlreadyOccurs(Natural),

    #[error("divisor enumeration over {primes} primes exceeds the cap of 2^{cap_log2} divisors")]
    DivisorOverflow { primes: usize, cap_log2: u32 },

    #[error("search exceeded cap {0}")]
    NotFound(u64),

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("validation error: {0}")]
    Validation(String),

    #[error("internal consistency error: {0}")]
    Internal(String),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}
