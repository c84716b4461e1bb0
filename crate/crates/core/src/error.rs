use thiserror::Error;

/// Errors raised anywhere in the library.
///
/// Variants fall into four families that the CLI maps onto exit codes:
/// usage/syntax (2), domain (3) and precision (4). See [`Error::exit_code`].
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("coefficient mode mismatch: {0} vs {1}")]
    ModeMismatch(String, String),
    #[error("division by zero")]
    DivisionByZero,
    #[error("TranscendentalInRationalMode: {0} has no exact rational value")]
    TranscendentalInRationalMode(String),
    #[error("DomainError: {0}")]
    Domain(String),
    #[error("NotInValuationRing")]
    NotInValuationRing,
    #[error("NotPositive")]
    NotPositive,
    #[error("NotInfinitesimal")]
    NotInfinitesimal,
    #[error("Indeterminate: {0}")]
    Indeterminate(String),
    #[error("InsufficientPrecision: {0}")]
    InsufficientPrecision(String),
    #[error("CutoffUnreachable: valuation {valuation} never reaches {gap}")]
    CutoffUnreachable { valuation: String, gap: String },
    #[error("syntax error at offset {offset} (line {line}, column {column}): {message}")]
    Syntax {
        offset: usize,
        line: usize,
        column: usize,
        message: String,
    },
    #[error("unknown function `{0}`")]
    UnknownFunction(String),
    #[error("`{name}` expects {expected} argument(s), got {found}")]
    Arity {
        name: String,
        expected: usize,
        found: usize,
    },
    #[error("unknown suite `{0}`")]
    UnknownSuite(String),
    #[error("invalid configuration: {0}")]
    Config(String),
}

impl Error {
    /// Process exit code used by the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Syntax { .. }
            | Error::UnknownFunction(_)
            | Error::Arity { .. }
            | Error::UnknownSuite(_)
            | Error::Config(_)
            | Error::DimensionMismatch { .. }
            | Error::ModeMismatch(..) => 2,
            Error::DivisionByZero
            | Error::TranscendentalInRationalMode(_)
            | Error::Domain(_)
            | Error::NotInValuationRing
            | Error::NotPositive
            | Error::NotInfinitesimal => 3,
            Error::Indeterminate(_)
            | Error::InsufficientPrecision(_)
            | Error::CutoffUnreachable { .. } => 4,
        }
    }

    pub(crate) fn dim(expected: usize, found: usize) -> Self {
        Error::DimensionMismatch { expected, found }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
