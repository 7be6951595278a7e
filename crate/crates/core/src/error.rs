use thiserror::Error;

/// Errors raised by the engine. Law failures are never errors; they are
/// reported as data in a [`crate::Verdict`].
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("syntax error at offset {position}: expected {}, found {found}", expected.join(" or "))]
    Syntax { position: usize, expected: Vec<String>, found: String },

    #[error("unknown variable `{0}`")]
    UnknownVariable(String),

    #[error("invalid vocabulary: {0}")]
    InvalidVocabulary(String),

    #[error("vocabulary too large: {n} variables exceeds the cap of {cap} for {what}")]
    VocabularyTooLarge { n: usize, cap: usize, what: String },

    #[error("vocabulary mismatch: expected {expected} variables, got {found}")]
    VocabularyMismatch { expected: usize, found: usize },

    #[error("the ordering is not connected; this check requires a connected entrenchment")]
    ConnectivityRequired,

    #[error("the ordering is not weakly disjunctive; this check requires weak disjunction")]
    WeakDisjunctionRequired,

    #[error("line {line}: {message}")]
    Format { line: usize, message: String },
}

pub type Result<T> = std::result::Result<T, Error>;
