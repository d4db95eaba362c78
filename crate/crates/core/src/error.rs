use thiserror::Error;

/// Errors raised by waveform construction, ambiguity evaluation and sensing.
#[derive(Debug, Error)]
pub enum AfdmError {
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("subcarrier index {index} out of range for N = {n}")]
    SubcarrierOutOfRange { index: usize, n: usize },

    #[error("time {t} s outside subcarrier support [0, {period})")]
    OutsideSupport { t: f64, period: f64 },

    #[error("length mismatch: expected {expected}, got {actual}")]
    LengthMismatch { expected: usize, actual: usize },

    #[error("invalid frame layout: {0}")]
    Layout(String),

    #[error("delay {tau} s outside the representative-case window")]
    OutsideWindow { tau: f64 },

    #[error("degenerate parallelogram (basis vectors are parallel)")]
    DegenerateParallelogram,

    #[error("grid mismatch: {0}")]
    GridMismatch(String),

    #[error("{0}")]
    Precondition(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("serialization error: {0}")]
    Json(#[from] serde_json::Error),

    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, AfdmError>;
