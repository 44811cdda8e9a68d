use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DmlError {
    #[error("dimension mismatch: expected {expected}, got {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("field mismatch: {left} vs {right}")]
    FieldMismatch { left: String, right: String },

    #[error("not integral at p = {p}: denominator {denominator} is divisible by p")]
    NonIntegralAtP { p: u64, denominator: String },

    #[error("syntax error at offset {offset}: {message}")]
    Syntax { offset: usize, message: String },

    #[error("unknown variable `{name}` at offset {offset}")]
    UnknownVariable { name: String, offset: usize },

    #[error("budget exceeded: {0}")]
    BudgetExceeded(String),

    #[error("no p-integral prime among the candidates")]
    NoGoodPrime,

    #[error("contraction not certified: {0}")]
    ContractionNotCertified(String),

    #[error("precision exhausted: {0}")]
    PrecisionExhausted(String),

    #[error("degenerate recurrence: {0}")]
    DegenerateRecurrence(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("invalid input: {0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, DmlError>;
