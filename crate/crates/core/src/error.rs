use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("modulus {0} is not a prime")]
    NotPrime(u64),

    #[error("modulus {0} does not fit the supported word size (must be < 2^32)")]
    ModulusTooLarge(u64),

    #[error("field elements belong to different fields (p={0} vs p={1})")]
    FieldMismatch(u64, u64),

    #[error("division by zero")]
    DivisionByZero,

    #[error("operation is undefined on the zero polynomial")]
    ZeroPolynomial,

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("invalid instance: {0}")]
    InvalidInstance(String),

    #[error("infeasible decoding parameters: {0}")]
    Infeasible(String),

    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

pub type Result<T> = std::result::Result<T, Error>;
