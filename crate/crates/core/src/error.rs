use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("chart dimension mismatch: expected {expected}, got {got}")]
    ChartDimMismatch { expected: usize, got: usize },

    #[error("variable index {index} out of range for chart dimension {dim}")]
    IndexOutOfRange { index: usize, dim: usize },

    #[error("point is off the unit sphere (|x| = {norm})")]
    OffSphere { norm: f64 },

    #[error("degenerate induced metric (det g / prod g_aa = {det:e})")]
    DegenerateMetric { det: f64 },

    #[error("operation requires dimension {expected}, got {got}")]
    WrongDimension { expected: usize, got: usize },

    #[error("mean curvature vanishes (|H| = {norm:e})")]
    ZeroMeanCurvature { norm: f64 },

    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("epsilon must be positive, got {0}")]
    NonpositiveEpsilon(f64),

    #[error("empty sample set")]
    EmptySampleSet,

    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("no closed-form oracle for {0}")]
    NoOracle(String),

    #[error("usage: {0}")]
    Usage(String),

    #[error("i/o error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
