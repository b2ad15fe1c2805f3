use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension must be positive")]
    ZeroDimension,
    #[error("{what} requires an even stored dimension, got {dimension}")]
    OddDimension { what: &'static str, dimension: usize },
    #[error("ensemble kind {kind} is not valid for {operation}")]
    WrongKind {
        kind: &'static str,
        operation: &'static str,
    },
    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },
    #[error("diagonal data must be nonempty")]
    EmptyData,
    #[error("matrix is not hermitian (residual {residual:e})")]
    NotHermitian { residual: f64 },
    #[error("matrix is not unitary (residual {residual:e})")]
    NotUnitary { residual: f64 },
    #[error("eigenvalue gap {gap:e} at index {index} is below the tie tolerance {tolerance:e}")]
    DegenerateCoupling {
        index: usize,
        gap: f64,
        tolerance: f64,
    },
    #[error("spectrum point {value} lies outside [0, 1]")]
    SpectrumOutOfRange { value: f64 },
    #[error("argument {value} outside the domain {domain}")]
    OutOfDomain { value: f64, domain: &'static str },
    #[error("function is not finite at spectrum point {at}")]
    NonFiniteFunction { at: f64 },
    #[error("support must contain at least one interval")]
    EmptySupport,
    #[error("invalid measure: {0}")]
    InvalidMeasure(String),
    #[error("subordination fixed point did not converge at z = {re} + {im}i")]
    NoConvergence { re: f64, im: f64 },
    #[error("optimizer failed to converge after {restarts} restarts")]
    OptimizerFailed { restarts: usize },
    #[error("coefficient is not hermitian")]
    NonHermitianCoefficient,
    #[error("coefficient dimension mismatch: expected {expected}, got {actual}")]
    CoefficientMismatch { expected: usize, actual: usize },
    #[error("letter index {index} outside alphabet of size {alphabet}")]
    LetterOutOfRange { index: usize, alphabet: usize },
    #[error("alphabet size must be positive")]
    EmptyAlphabet,
    #[error("parse error at byte {position}: {message}")]
    Parse { position: usize, message: String },
    #[error("grid mismatch: {0}")]
    GridMismatch(String),
    #[error("eigendecomposition failed: {0}")]
    Decomposition(String),
    #[error("io error: {0}")]
    Io(String),
    #[error("malformed file: {0}")]
    Format(String),
}

impl From<std::io::Error> for Error {
    fn from(err: std::io::Error) -> Self {
        Error::Io(err.to_string())
    }
}
