use thiserror::Error;

/// Errors raised anywhere in the synthesis pipeline.
#[derive(Debug, Error)]
pub enum Error {
    #[error("duplicate state row: {0}")]
    DuplicateState(String),
    #[error("empty action set{0}")]
    EmptyActionSet(String),
    #[error("format error: {0}")]
    Format(String),
    #[error("unbound variable `{0}`")]
    UnboundVariable(String),
    #[error("policy has no rows")]
    EmptyPolicy,
    #[error("order violation: node at level {level} above child at level {child}")]
    OrderViolation { level: usize, child: usize },
    #[error("node handle belongs to a different manager")]
    ManagerMismatch,
    #[error("terminal kinds mixed in one diagram")]
    KindMismatch,
    #[error("predicate `{0}` is not covered by the predicate bijection")]
    MissingPredicate(String),
    #[error("exhaustive reordering over {vars} variables exceeds the cap of {cap}")]
    ExhaustiveTooLarge { vars: usize, cap: usize },
    #[error("care set is empty")]
    EmptyCareSet,
    #[error("states {0} and {1} lift to the same predicate vector but carry different actions")]
    ConflictingLift(String, String),
    #[error("value {value} of variable `{var}` was not observed in the encoding")]
    UnknownValue { var: String, value: String },
    #[error("domain error: {0}")]
    Domain(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
