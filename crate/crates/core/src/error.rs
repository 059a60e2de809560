use thiserror::Error;

/// Errors raised by field, polynomial, matrix and code operations.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("characteristic {0} is not prime")]
    NotPrime(u64),
    #[error("extension degree must be at least 1")]
    ZeroExtensionDegree,
    #[error("field size {p}^{e} overflows the element encoding")]
    FieldTooLarge { p: u64, e: u32 },
    #[error("invalid modulus: {0}")]
    InvalidModulus(String),
    #[error("element code {code} is out of range for GF({q})")]
    ElementOutOfRange { code: u64, q: u64 },
    #[error("zero has no multiplicative inverse")]
    DivisionByZero,
    #[error("operands belong to different fields or rings")]
    FieldMismatch,
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("integer overflow while computing {0}")]
    Overflow(&'static str),
    #[error("field GF({q}) is too small: {needed} distinct elements needed")]
    FieldTooSmall { q: u64, needed: u64 },
    #[error("no superregular {rows}x{cols} matrix found after {tries} tries")]
    SearchExhausted { rows: usize, cols: usize, tries: u64 },
    #[error("the matrix is zero")]
    ZeroMatrix,
    #[error("the generator matrix does not have full row rank")]
    RankDeficient,
    #[error("supplied matrix is not superregular; failing minor rows {rows:?} cols {cols:?}")]
    NotSuperregular { rows: Vec<usize>, cols: Vec<usize> },
}

pub type Result<T> = std::result::Result<T, Error>;
