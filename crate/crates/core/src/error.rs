use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("isometry is not hyperbolic (|trace| = {trace})")]
    NotHyperbolic { trace: f64 },

    #[error("degenerate configuration: boundary points coincide within {tolerance:e}")]
    DegenerateConfiguration { tolerance: f64 },

    #[error("length must be positive, got {0}")]
    NonPositiveLength(f64),

    #[error("word is empty after reduction")]
    EmptyWord,

    #[error("pants curve index {index} out of range (surface has {count} pants curves)")]
    BadIndex { index: usize, count: usize },

    #[error("unsupported genus {0} (need g >= 2)")]
    UnsupportedGenus(usize),

    #[error("cannot parse word {input:?}: {reason}")]
    ParseWord { input: String, reason: String },

    #[error("Fenchel-Nielsen coordinates out of range: {0}")]
    OutOfRange(String),

    #[error("representation construction failed: {0}")]
    ConstructionFailure(String),

    #[error("intersection count not stable at radius {radius}: {low} vs {high}")]
    CutoffUnstable { radius: usize, low: usize, high: usize },

    #[error("oracle inconclusive: {0}")]
    OracleInconclusive(String),

    #[error("degenerate crossing: {0}")]
    DegenerateCrossing(String),

    #[error("empty curve pool")]
    EmptyPool,

    #[error("invalid current: {0}")]
    InvalidCurrent(String),

    #[error("current is not filling")]
    NonFillingInput,

    #[error("sampling starved after {0} rejections")]
    SamplingStarvation(usize),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("io error: {0}")]
    Io(String),

    #[error("parse error: {0}")]
    Parse(String),
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
