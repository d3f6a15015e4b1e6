use thiserror::Error;

/// Errors raised by frame setup, basis construction and the experiment
/// harness.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("frame length {0} is invalid: must be even and at least 8")]
    InvalidFrameLength(usize),

    #[error("frequency {freq} rad/sample (partial {index}) is outside the open interval (0, pi)")]
    FrequencyOutOfRange { index: usize, freq: f64 },

    #[error("{partials} partials need {columns} basis columns but the frame has only {frame_len} samples")]
    Underdetermined {
        partials: usize,
        columns: usize,
        frame_len: usize,
    },

    #[error("partials {first} and {second} have frequencies closer than 1e-9 rad/sample")]
    DuplicateFrequency { first: usize, second: usize },

    #[error("at least one partial is required")]
    NoPartials,

    #[error("frame has {actual} samples, expected {expected}")]
    LengthMismatch { expected: usize, actual: usize },

    #[error("normal equations are numerically singular")]
    SingularSystem,

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("signal has zero energy; SNR is undefined")]
    ZeroEnergySignal,
}

pub type Result<T> = std::result::Result<T, Error>;
