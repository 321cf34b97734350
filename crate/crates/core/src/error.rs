use thiserror::Error;

/// Every failure mode in the library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("matrix is not square: {rows}x{cols}")]
    NonSquare { rows: usize, cols: usize },

    #[error("matrix is not Hermitian (residual {residual:.3e})")]
    NonHermitian { residual: f64 },

    #[error("matrix is not positive semidefinite (min eigenvalue {min_eigenvalue:.3e})")]
    NotPsd { min_eigenvalue: f64 },

    #[error("trace is not 1 (got {trace})")]
    NotUnitTrace { trace: f64 },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("Bloch triple does not describe a state (min eigenvalue {min_eigenvalue:.3e})")]
    InvalidBlochVector { min_eigenvalue: f64 },

    #[error("{what} out of range: {value}")]
    OutOfRange { what: &'static str, value: f64 },

    #[error("invalid probability vector: {0}")]
    InvalidProbabilities(String),

    #[error("operation requires dim_a = {expected}, state has dim_a = {found}")]
    WrongDimension { expected: usize, found: usize },

    #[error("unsupported dimension: {0}")]
    UnsupportedDimension(String),

    #[error("unknown family: {0}")]
    UnknownFamily(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("io error: {0}")]
    Io(String),
}

impl Error {
    /// Stable machine-readable tag used in CLI reports and the C ABI.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::NonSquare { .. } => "non_square",
            Error::NonHermitian { .. } => "non_hermitian",
            Error::NotPsd { .. } => "not_psd",
            Error::NotUnitTrace { .. } => "not_unit_trace",
            Error::DimensionMismatch { .. } => "dimension_mismatch",
            Error::InvalidBlochVector { .. } => "invalid_bloch_vector",
            Error::OutOfRange { .. } => "out_of_range",
            Error::InvalidProbabilities(_) => "invalid_probabilities",
            Error::WrongDimension { .. } => "wrong_dimension",
            Error::UnsupportedDimension(_) => "unsupported_dimension",
            Error::UnknownFamily(_) => "unknown_family",
            Error::Parse(_) => "parse",
            Error::Io(_) => "io",
        }
    }

    /// Process exit code: 3 for unsupported requests, 2 for everything the caller fed in wrong.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::WrongDimension { .. } | Error::UnsupportedDimension(_) => 3,
            _ => 2,
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
