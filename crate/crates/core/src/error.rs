use alloc::string::String;

/// Errors raised by the core algorithms.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("document {0} has no pre-segmented tokens")]
    MissingSegmentation(String),
    #[error("corpus is empty")]
    EmptyCorpus,
    #[error("duplicate id {0}")]
    DuplicateId(String),
    #[error("empty id")]
    EmptyId,
    #[error("unknown id {0}")]
    UnknownId(String),
    #[error("expected dimension {expected}, got {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("vector for {0} has zero norm")]
    ZeroNormVector(String),
    #[error("duplicate word {0}")]
    DuplicateWord(String),
    #[error("embedding dimension must be positive")]
    ZeroDimension,
    #[error("query is empty")]
    EmptyQuery,
    #[error("sentence is empty")]
    EmptySentence,
    #[error("training set is empty")]
    EmptyTraining,
    #[error("training set contains a single class")]
    SingleClassTraining,
    #[error("need at least {needed} distinct queries, found {found}")]
    TooFewQueries { needed: usize, found: usize },
    #[error("invalid grid: {0}")]
    InvalidGrid(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("score lists have mismatched lengths")]
    LengthMismatch,
    #[error("pairs belong to more than one query")]
    MixedQueries,
    #[error("ranked list is empty")]
    EmptyList,
    #[error("label must be 0 or 1, got {0}")]
    InvalidLabel(u32),
}

pub type Result<T> = core::result::Result<T, Error>;
