use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch in {context}: expected {expected}, found {found}")]
    DimensionMismatch {
        context: String,
        expected: usize,
        found: usize,
    },
    #[error("space mismatch in {0}")]
    SpaceMismatch(String),
    #[error("division by zero")]
    DivisionByZero,
    #[error("structural error: {0}")]
    Shape(String),
    #[error("not invertible: {0}")]
    NotInvertible(String),
    #[error("invalid group table: {0}")]
    InvalidGroup(String),
    #[error("not Hopf-Galois: {0}")]
    NotGalois(String),
    #[error("no solution: {0}")]
    NoSolution(String),
    #[error("not a cotrace (cotraces): {0}")]
    NotCotrace(String),
    #[error("guardrail: {what} needs dimension {requested}, limit is {limit}")]
    Guardrail {
        what: String,
        requested: usize,
        limit: usize,
    },
    #[error("axiom failure ({equation}): {detail}")]
    Axiom { equation: String, detail: String },
    #[error("falsified: {0}")]
    Falsification(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("unknown field {0:?}")]
    UnknownField(String),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub fn axiom(equation: impl Into<String>, detail: impl Into<String>) -> Self {
        Error::Axiom {
            equation: equation.into(),
            detail: detail.into(),
        }
    }

    pub fn dims(context: impl Into<String>, expected: usize, found: usize) -> Self {
        Error::DimensionMismatch {
            context: context.into(),
            expected,
            found,
        }
    }

    /// Stable numeric code shared by the CLI and the C interface.
    pub fn code(&self) -> i32 {
        match self {
            Error::Parse(_) | Error::Json(_) | Error::UnknownField(_) => 10,
            Error::Io(_) => 11,
            Error::Guardrail { .. } => 12,
            Error::Axiom { .. } => 13,
            Error::DimensionMismatch { .. } | Error::SpaceMismatch(_) | Error::Shape(_) => 14,
            Error::NotCotrace(_) => 15,
            Error::NotGalois(_) => 16,
            Error::NoSolution(_) => 17,
            Error::NotInvertible(_) | Error::DivisionByZero => 18,
            Error::InvalidGroup(_) => 19,
            Error::Falsification(_) => 20,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
