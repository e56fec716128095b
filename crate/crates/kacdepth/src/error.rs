use thiserror::Error;

/// Every failure the library can report.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("invalid Adams index")]
    InvalidAdamsIndex,
    #[error("exp requires augmentation-ideal input")]
    ExpDomain,
    #[error("log requires unit constant term")]
    LogDomain,
    #[error("cannot contract loop")]
    ContractLoop,
    #[error("no spanning tree")]
    NoSpanningTree,
    #[error("non-unit")]
    NonUnit,
    #[error("enumeration too large")]
    EnumerationTooLarge,
    #[error("toric indecomposables require connected quiver")]
    DisconnectedQuiver,
    #[error("decomposable representation")]
    Decomposable,
    #[error("limit does not converge")]
    NotConvergent,
    #[error("specialization not convergent")]
    SpecializationNotConvergent,
    #[error("order is not a shelling")]
    NotAShelling,
    #[error("lambda not generic")]
    LambdaNotGeneric,
    #[error("rank out of implemented range")]
    RankOutOfRange,
    #[error("polynomiality violated")]
    PolynomialityViolated,
    #[error("characteristic too small: need p > {0}")]
    CharacteristicTooSmall(i64),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("index out of range: {0}")]
    OutOfRange(String),
    #[error("invalid argument: {0}")]
    Invalid(String),
    #[error("parse error: {0}")]
    Parse(String),
}

/// Coarse classification used to pick process exit codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorKind {
    /// Malformed or out-of-domain input.
    Input,
    /// An enumeration guard tripped.
    Guard,
    /// A mathematical assertion failed.
    Math,
}

impl Error {
    pub fn kind(&self) -> ErrorKind {
        match self {
            Error::EnumerationTooLarge => ErrorKind::Guard,
            Error::NotAShelling | Error::PolynomialityViolated => ErrorKind::Math,
            _ => ErrorKind::Input,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
