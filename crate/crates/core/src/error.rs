use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("quadratic fields differ: sqrt({0}) vs sqrt({1})")]
    FieldMismatch(u64, u64),
    #[error("sqrt({0}) is not a valid field generator: d must be a positive square-free integer")]
    InvalidRadicand(i64),
    #[error("cannot parse {kind} from {input:?}")]
    Parse { kind: &'static str, input: String },
    #[error("q must exceed 1 (got {0})")]
    QNotAboveOne(String),
    #[error("q must be positive (got {0})")]
    QNotPositive(String),
    #[error("lambda must exceed 1 (got {0})")]
    LambdaNotAboveOne(f64),
    #[error("{name} must be at least {min} (got {got})")]
    TooSmall {
        name: &'static str,
        min: u64,
        got: u64,
    },
    #[error("tolerance must be positive and finite (got {0})")]
    BadTolerance(f64),
    #[error("expected a rational value but the sqrt part is {0}")]
    IrrationalResidue(String),
}
