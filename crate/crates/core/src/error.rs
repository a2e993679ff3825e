use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("modulus is reducible over GF({p})")]
    ReducibleModulus { p: u32 },
    #[error("modulus must have degree {expected}, got {found}")]
    DegreeMismatch { expected: u32, found: usize },
    #[error("field of order {p}^{k} exceeds the supported size 2^16")]
    FieldTooLarge { p: u32, k: u32 },
    #[error("element index {idx} out of range for a field of order {q}")]
    InvalidElement { idx: u64, q: u32 },
    #[error("division by zero")]
    DivisionByZero,
    #[error("{what} has {size} entries, limit is {limit}")]
    TooLargeToMaterialize { what: &'static str, size: u128, limit: u128 },
    #[error("vertex id {id} is not a valid {side} vertex")]
    InvalidVertexId { id: u64, side: &'static str },
    #[error("vertex id {0} appears more than once")]
    DuplicateVertex(u64),
    #[error("matrix is not symmetric within tolerance (entry ({row}, {col}))")]
    NotSymmetric { row: usize, col: usize },
    #[error("eigensolver did not converge in {sweeps} sweeps")]
    NoConvergence { sweeps: usize },
    #[error("unknown variable {0:?}")]
    UnknownVariable(String),
    #[error("variable {0:?} already exists")]
    DuplicateVariable(String),
    #[error("function is undefined on an outcome in the support")]
    PartialFunction,
    #[error("invalid probability table: {0}")]
    InvalidTable(String),
    #[error("protocol did not halt within {max_rounds} rounds")]
    NonHalting { max_rounds: usize },
    #[error("parties disagree on the key in branch {0}")]
    KeyDisagreement(String),
    #[error("missing variable {0:?} in execution table")]
    MissingVariable(String),
    #[error("search space of {size} encoders exceeds the limit {limit}")]
    SearchSpaceTooLarge { size: u128, limit: u128 },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

impl Error {
    /// Stable machine-readable name of the variant.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::NotPrime(_) => "NotPrime",
            Error::ReducibleModulus { .. } => "ReducibleModulus",
            Error::DegreeMismatch { .. } => "DegreeMismatch",
            Error::FieldTooLarge { .. } => "FieldTooLarge",
            Error::InvalidElement { .. } => "InvalidElement",
            Error::DivisionByZero => "DivisionByZero",
            Error::TooLargeToMaterialize { .. } => "TooLargeToMaterialize",
            Error::InvalidVertexId { .. } => "InvalidVertexId",
            Error::DuplicateVertex(_) => "DuplicateVertex",
            Error::NotSymmetric { .. } => "NotSymmetric",
            Error::NoConvergence { .. } => "NoConvergence",
            Error::UnknownVariable(_) => "UnknownVariable",
            Error::DuplicateVariable(_) => "DuplicateVariable",
            Error::PartialFunction => "PartialFunction",
            Error::InvalidTable(_) => "InvalidTable",
            Error::NonHalting { .. } => "NonHalting",
            Error::KeyDisagreement(_) => "KeyDisagreement",
            Error::MissingVariable(_) => "MissingVariable",
            Error::SearchSpaceTooLarge { .. } => "SearchSpaceTooLarge",
            Error::InvalidParameter(_) => "InvalidParameter",
        }
    }

    /// True for errors caused by invalid user-supplied parameters.
    pub fn is_usage(&self) -> bool {
        matches!(
            self,
            Error::NotPrime(_)
                | Error::ReducibleModulus { .. }
                | Error::DegreeMismatch { .. }
                | Error::FieldTooLarge { .. }
                | Error::InvalidParameter(_)
        )
    }
}

pub(crate) fn guard(what: &'static str, size: u128, limit: u128) -> Result<()> {
    if size > limit {
        Err(Error::TooLargeToMaterialize { what, size, limit })
    } else {
        Ok(())
    }
}
