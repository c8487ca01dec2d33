use thiserror::Error;

/// Crate-wide error type. Arithmetic that cannot fail (addition of two
/// polynomials over the same field, say) panics on misuse instead; fallible
/// operations at the public API surface return one of these.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("zero has no multiplicative inverse")]
    ZeroInverse,
    #[error("division by the zero polynomial")]
    DivisionByZeroPolynomial,
    #[error("field mismatch: F_{0} vs F_{1}")]
    FieldMismatch(u64, u64),
    #[error("series has no known nonzero coefficient")]
    ZeroSeries,
    #[error("insufficient precision: need {required} fractional coefficients, have {available}")]
    InsufficientPrecision { required: usize, available: usize },
    #[error("order {order} needs {needed} coefficients, got {got}")]
    InsufficientCoefficients {
        order: usize,
        needed: usize,
        got: usize,
    },
    #[error("operation requires F_{expected}, got F_{got}")]
    WrongField { expected: u64, got: u64 },
    #[error("F_{0} is too small for the generic construction; use the F_2 variant")]
    FieldTooSmall(u64),
    #[error("partial quotient at position {0} is constant")]
    InvalidPartialQuotient(usize),
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },
}

pub type Result<T> = std::result::Result<T, Error>;
