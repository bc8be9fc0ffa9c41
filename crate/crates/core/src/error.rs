use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("modulus {0} is not prime")]
    NotPrime(u64),
    #[error("modulus {0} exceeds the supported range (p < 2^31)")]
    ModulusTooLarge(u64),
    #[error("operands belong to different fields (F_{left} vs F_{right})")]
    FieldMismatch { left: u64, right: u64 },
    #[error("division by zero")]
    DivisionByZero,
    #[error("operation undefined for the zero polynomial")]
    ZeroPolynomial,
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("linear system has no solution: {0}")]
    Inconsistent(String),
    #[error("precondition not met: {0}")]
    Precondition(String),
    #[error("state space of {states} exceeds the limit {limit}")]
    StateLimit { states: u128, limit: u64 },
    /// An internal cross-check failed. Indicates a bug, never bad input.
    #[error("internal consistency violation: {0}")]
    Consistency(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
