use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("operator is not solvable for its highest derivatives: leading coefficient matrix is singular")]
    SingularLeadingCoefficient,

    #[error("operator must have order at least {0}")]
    OrderTooLow(usize),

    #[error("invalid multipliers at {point}: {reason}")]
    InvalidMultipliers { point: String, reason: String },

    #[error("no multipliers available at {0}")]
    MissingMultipliers(String),

    #[error("cannot locate the roots of denominator factor {0} over Q(i)")]
    UnsupportedPole(String),

    #[error("integer roots of the zero polynomial are undefined")]
    ZeroPolynomial,

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("internal error: {0}")]
    Internal(String),
}
