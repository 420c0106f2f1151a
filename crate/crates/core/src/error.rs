use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("index {index} out of range for {len} variables")]
    IndexOutOfRange { index: usize, len: usize },

    #[error("arity mismatch: expected {expected}, got {got}")]
    ArityMismatch { expected: usize, got: usize },

    #[error("rank bound {r} out of range 1..={max}")]
    RankOutOfRange { r: usize, max: usize },

    #[error("leading {0}x{0} block is singular")]
    SingularPivot(usize),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("hypothesis violation: {0}")]
    HypothesisViolation(String),

    #[error("budget exhausted: {0}")]
    BudgetExhausted(String),

    #[error("not separated: {0}")]
    NotSeparated(String),

    #[error("precondition failure: {0}")]
    PreconditionFailure(String),

    #[error("stage {stage} failed: {reason}")]
    StageFailure { stage: usize, reason: String },

    #[error("parse error at line {line}, column {column}: {message}")]
    Parse { line: usize, column: usize, message: String },
}

impl Error {
    /// Process exit code used by the command-line tool.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::BudgetExhausted(_)
            | Error::StageFailure { .. }
            | Error::NotSeparated(_)
            | Error::PreconditionFailure(_) => 2,
            Error::HypothesisViolation(_) => 3,
            Error::Parse { .. } => 4,
            _ => 1,
        }
    }
}
