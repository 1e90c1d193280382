use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid group spec: {0}")]
    SpecInvalid(String),
    #[error("group order budget exceeded: more than {limit} elements")]
    OrderBudgetExceeded { limit: usize },
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("precondition failed: {0}")]
    PreconditionFailed(String),
    #[error("search budget exceeded: {0}")]
    SearchBudgetExceeded(String),
    #[error("empty subgroup family")]
    EmptyFamily,
    #[error("group mismatch: {0}")]
    GroupMismatch(String),
    #[error("budget exceeded: {what} needs {size}, limit {limit}")]
    BudgetExceeded {
        what: String,
        size: usize,
        limit: usize,
    },
    #[error("subgroup is not cyclic")]
    NotCyclic,
    #[error("hypothesis violated: {0}")]
    HypothesisViolated(String),
    #[error("certificate unavailable: {0}")]
    CertificateUnavailable(String),
    #[error("{n} is not coprime to {p}")]
    NotCoprime { n: u64, p: u64 },
    #[error("integer overflow during exact elimination")]
    Overflow,
}

pub type Result<T> = std::result::Result<T, Error>;
