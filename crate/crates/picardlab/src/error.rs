use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("gcd undefined for (0, 0)")]
    GcdUndefined,
    #[error("zero argument where a nonzero Gaussian integer is required")]
    ZeroArgument,
    #[error("not invertible modulo the given modulus")]
    NotInvertible,
    #[error("pole")]
    Pole,
    #[error("regime: {0}")]
    Regime(String),
    #[error("D-extraction not supported for this n")]
    DExtraction,
    #[error("weight too wide: {0}")]
    WeightTooWide(String),
    #[error("increase H: box height {h} cannot certify X = {x}")]
    IncreaseH { h: i64, x: f64 },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("table values not strictly ascending at line {line}")]
    NonAscending { line: usize },
    #[error("nonpositive spectral parameter at line {line}")]
    NonPositive { line: usize },
    #[error("io: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;
