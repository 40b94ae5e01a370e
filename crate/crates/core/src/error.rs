use thiserror::Error;

/// Every failure the library reports. Variant names double as the stable
/// error names printed by the command-line front end.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("operands belong to different fields: {0}")]
    FieldMismatch(String),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("{0} is not prime")]
    NonPrimeChar(u64),
    #[error("modulus {0} is not irreducible of the requested degree")]
    ReducibleModulus(String),
    #[error("{m} is divisible by the characteristic {p}")]
    NotCoprime { p: u64, m: u64 },
    #[error("the zero polynomial has no lowest-degree term")]
    ZeroPolynomial,
    #[error("matrix is not nilpotent")]
    NotNilpotent,
    #[error("partition of total {total} does not fit in dimension {n}")]
    PartitionTooLarge { total: usize, n: usize },
    #[error("argument out of range: {0}")]
    OutOfRange(String),
    #[error("minimal polynomial has an inseparable squarefree part")]
    InseparableMinimalPolynomial,
    #[error("invalid cell-size set: {0}")]
    InvalidQ(String),
    #[error("n = {n} exceeds the enumeration bound {bound}")]
    BoundExceeded { n: usize, bound: usize },
    #[error("{m} is a power of the characteristic {p}; its roots of unity are trivial")]
    IsCharPower { m: usize, p: u64 },
    #[error("dimension {n} is too small for the construction (needs {needed})")]
    DimensionTooSmall { n: usize, needed: usize },
    #[error("internal inconsistency: {0}")]
    InternalInconsistency(String),
    #[error("enumeration budget exceeded for partition {partition}: needs {required}, budget {budget}")]
    BudgetExceeded {
        partition: String,
        required: u128,
        budget: u128,
    },
    #[error("exhaustive enumeration needs a finite field")]
    InfiniteField,
    #[error("criterion, oracle and witness disagree: {0}")]
    Inconsistency(String),
    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    /// The variant name, used as a machine-readable error tag.
    pub fn name(&self) -> &'static str {
        match self {
            Error::DivisionByZero => "DivisionByZero",
            Error::FieldMismatch(_) => "FieldMismatch",
            Error::DimensionMismatch(_) => "DimensionMismatch",
            Error::NonPrimeChar(_) => "NonPrimeChar",
            Error::ReducibleModulus(_) => "ReducibleModulus",
            Error::NotCoprime { .. } => "NotCoprime",
            Error::ZeroPolynomial => "ZeroPolynomial",
            Error::NotNilpotent => "NotNilpotent",
            Error::PartitionTooLarge { .. } => "PartitionTooLarge",
            Error::OutOfRange(_) => "OutOfRange",
            Error::InseparableMinimalPolynomial => "InseparableMinimalPolynomial",
            Error::InvalidQ(_) => "InvalidQ",
            Error::BoundExceeded { .. } => "BoundExceeded",
            Error::IsCharPower { .. } => "IsCharPower",
            Error::DimensionTooSmall { .. } => "DimensionTooSmall",
            Error::InternalInconsistency(_) => "InternalInconsistency",
            Error::BudgetExceeded { .. } => "BudgetExceeded",
            Error::InfiniteField => "InfiniteField",
            Error::Inconsistency(_) => "Inconsistency",
            Error::Parse(_) => "Parse",
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
