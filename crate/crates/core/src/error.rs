use thiserror::Error;

/// Errors shared across the whole crate.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum Error {
    #[error("capacity {0} exceeds the configured maximum {1}")]
    CapacityExceeded(u64, u64),
    #[error("malformed instance document: {0}")]
    ParseError(String),
    #[error("inconsistent instance shape: {0}")]
    ShapeError(String),
    #[error("value {0} is not invertible modulo {1}")]
    NotInvertible(u64, u64),
    #[error("p = 2 is not supported here; an odd prime is required")]
    OddPrimeRequired,
    #[error("order {0} does not divide the unit group order {1}")]
    OrderNotDividing(u64, u64),
    #[error("modulus {0} is too large for double-width arithmetic")]
    ModulusTooLarge(u64),
    #[error("prime {0} must exceed the instance capacity {1}")]
    PrimeTooSmall(u64, u64),
    #[error("field size {0} must exceed the instance capacity {1}")]
    FieldTooSmall(u64, u64),
    #[error("character sum left the prime subfield; this indicates an arithmetic bug")]
    NonRationalSum,
    #[error("inverse of zero requested in a finite field")]
    ZeroInverse,
    #[error("p^l = {0} does not divide the undivided sum {1}; this indicates an arithmetic bug")]
    DivisibilityViolation(u64, u64),
    #[error("duplicate prime {0} in modulus basket")]
    DuplicatePrime(u64),
    #[error("instance has no solutions; a positive count is required")]
    ZeroCount,
    #[error("instance has no solutions")]
    NoSolution,
    #[error("no subset satisfies the weight bound")]
    NoFeasibleSubset,
    #[error("instance too large for the brute-force oracle")]
    TooLarge,
    #[error("scalarization overflow: {0}")]
    Overflow(String),
    #[error("internal error: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
