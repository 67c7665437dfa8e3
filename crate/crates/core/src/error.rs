use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse { line: usize, column: usize, message: String },

    #[error("validation failed: {0}")]
    Validation(String),

    #[error("brute-force bound exceeded: {0}")]
    BoundExceeded(String),

    #[error("search space too large to enumerate: {0}")]
    SearchSpaceExceeded(String),

    #[error("the phase of the zero object is not defined")]
    ZeroObject,

    #[error("module is outside the declared universe: {0}")]
    OutOfUniverse(String),

    #[error("subspace tuple is not a submodule: {0}")]
    InvalidEmbedding(String),

    #[error("internal assertion failed: {0}")]
    InternalAssertion(String),

    #[error("module is not semistable")]
    NotSemistable,

    #[error("operation supports ambient rank at most {max}, got {rank}")]
    RankUnsupported { rank: usize, max: usize },

    #[error("unknown builtin algebra `{0}`")]
    UnknownBuiltin(String),

    #[error("invalid red path: {0}")]
    InvalidPath(String),

    #[error("invalid stability function: {0}")]
    InvalidStabilityFunction(String),

    #[error("criterion and exhaustive oracle disagree: {0}")]
    OracleDisagreement(String),
}

impl Error {
    pub(crate) fn parse(line: usize, column: usize, message: impl Into<String>) -> Self {
        Error::Parse { line, column, message: message.into() }
    }

    /// True for malformed input, as opposed to a domain-level failure.
    pub fn is_parse_error(&self) -> bool {
        matches!(self, Error::Parse { .. })
    }
}
