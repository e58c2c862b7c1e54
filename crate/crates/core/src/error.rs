use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("expected a mono WAV file, found {0} channels")]
    UnsupportedChannels(u16),
    #[error("unsupported WAV encoding: {0}")]
    UnsupportedEncoding(String),
    #[error("corrupt WAV header: {0}")]
    CorruptHeader(String),
    #[error("i/o failure on {path:?}: {message}")]
    IoFailure { path: PathBuf, message: String },

    #[error("invalid signal: {0}")]
    InvalidSignal(String),
    #[error("invalid synthetic spec: {0}")]
    InvalidSpec(String),
    #[error("invalid config: {0}")]
    InvalidConfig(String),

    #[error("invalid cutoffs: {0}")]
    InvalidCutoffs(String),
    #[error("signal too short: need at least {required} samples, got {actual}")]
    SignalTooShort { required: usize, actual: usize },
    #[error("series too short: need at least {required} frames, got {actual}")]
    SeriesTooShort { required: usize, actual: usize },
    #[error("spectrum reaches {available_hz} Hz but {required_hz} Hz is required")]
    SpectrumTooNarrow { required_hz: f64, available_hz: f64 },

    #[error("mean of the sequence is not positive")]
    ZeroMean,
    #[error("need at least {required} values, got {actual}")]
    TooFewValues { required: usize, actual: usize },
    #[error("variance is zero")]
    DegenerateVariance,

    #[error("training set is empty")]
    EmptyTrainingSet,
    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },
    #[error("ROC needs both classes present")]
    SingleClassInput,
    #[error("degenerate input: {0}")]
    DegenerateInput(String),

    #[error("malformed data: {0}")]
    Format(String),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, err: impl std::fmt::Display) -> Self {
        Error::IoFailure {
            path: path.into(),
            message: err.to_string(),
        }
    }
}
