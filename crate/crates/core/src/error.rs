use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("arrow {arrow} refers to unknown vertex `{vertex}`")]
    DanglingArrow { arrow: usize, vertex: String },
    #[error("vertex id `{0}` is used more than once")]
    DuplicateVertexId(String),
    #[error("vertex `{vertex}` has negative dimension {value}")]
    NegativeDimension { vertex: String, value: i64 },
    #[error("vertex `{vertex}` has negative gamma {value}")]
    NegativeGamma { vertex: String, value: i64 },
    #[error("dimension vector has {found} entries, quiver has {expected} vertices")]
    DimensionVectorMismatch { expected: usize, found: usize },
    #[error("quiver has no vertices")]
    EmptyQuiver,
    #[error("underlying graph of the quiver is not connected")]
    DisconnectedQuiver,
    #[error("dimension vector is zero everywhere")]
    EmptySupport,
    #[error("integer overflow while evaluating {0}")]
    Overflow(&'static str),
    #[error("enumeration budget exceeded: {what} (limit {limit})")]
    BudgetExceeded { what: &'static str, limit: u64 },
    #[error("reducedness needs at least two vertices")]
    TooFewVertices,
    #[error("quiver is not strongly connected")]
    NotStronglyConnected,
    #[error("invalid decomposition: {0}")]
    InvalidDecomposition(String),
    #[error("local quiver would need {count} arrows from summand {from} to summand {to}")]
    NegativeArrowCount { from: usize, to: usize, count: i64 },
    #[error("invalid multiplicity data: {0}")]
    InvalidGamma(String),
    #[error("setting is not prime")]
    NotPrime,
    #[error("setting is not reduced")]
    NotReduced,
    #[error("unsupported local setting: {0}")]
    UnsupportedFamily(String),
    #[error("gamma must be positive, vertex {0} has gamma 0")]
    NonPositiveGamma(usize),
    #[error("vertex {0} is not a root (sink) of the tree component")]
    NotARoot(usize),
    #[error("extended quiver: {0}")]
    InvalidExtension(String),
    #[error("fan verification failed: {0}")]
    VerificationFailure(String),
    #[error("fan has not been verified")]
    UnverifiedFan,
}
