use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("truncation orders differ: {0} vs {1}")]
    TruncationMismatch(usize, usize),

    #[error("series contexts differ (variables, caps or h-order)")]
    ContextMismatch,

    #[error("term violates the cap of variable `{var}`: {detail}")]
    CapViolation { var: String, detail: String },

    #[error("cannot expand: {0}")]
    Expansion(String),

    #[error("coefficient outside the exact window: {0}")]
    OutsideCaps(String),

    #[error("undefined coefficient: {0}")]
    UndefinedCoefficient(String),

    #[error("degree {degree} exceeds the degree cap {cap}")]
    DegreeOverflow { degree: u32, cap: u32 },

    #[error("singular system: {0}")]
    Singular(String),

    #[error("index out of range: {0}")]
    IndexOutOfRange(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
