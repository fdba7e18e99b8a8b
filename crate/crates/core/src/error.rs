use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("unknown label `{0}`")]
    UnknownLabel(String),
    #[error("duplicate label `{0}`")]
    DuplicateLabel(String),
    #[error("order relation has a cycle: {}", .cycle.join(" <= "))]
    CycleDetected { cycle: Vec<String> },
    #[error("order relation is not transitive: {a} <= {b} <= {c} but not {a} <= {c}")]
    NotTransitive { a: String, b: String, c: String },
    #[error("poset has {n} elements, exhaustive operations are limited to {limit}")]
    SizeLimitExceeded { n: usize, limit: usize },
    #[error("usage error: {0}")]
    Usage(String),
    #[error("lemma violated: {0}")]
    InternalLemmaViolation(String),
    #[error("selector is not a strict upper bound assignment: f({chain:?}) = {value}")]
    InvalidSelector { chain: Vec<String>, value: String },
    #[error("poset is empty")]
    EmptyPoset,
    #[error("subset is not a chain")]
    NotAChain,
    #[error("precondition failed: {0}")]
    PreconditionFailed(String),
    #[error("malformed input at {location}: {message}")]
    MalformedInput { location: String, message: String },
    #[error("unknown selector strategy `{0}`")]
    UnknownStrategy(String),
}

impl Error {
    pub(crate) fn malformed(location: impl Into<String>, message: impl Into<String>) -> Self {
        Error::MalformedInput {
            location: location.into(),
            message: message.into(),
        }
    }
}
