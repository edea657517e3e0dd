use core::fmt;

/// Errors surfaced by the separation core.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// Audio buffer is empty.
    EmptyAudio,
    /// A sample is NaN or infinite.
    NonFiniteSample,
    /// Sample rate must be a positive integer.
    InvalidSampleRate,
    /// A signal required to carry energy is identically zero.
    ZeroEnergy(&'static str),
    /// Two clips that must share a sample rate do not.
    SampleRateMismatch(u32, u32),
    /// Matrix/feature dimensions do not conform.
    ShapeMismatch {
        expected: (usize, usize),
        got: (usize, usize),
    },
    /// Signal shorter than one analysis window.
    ClipTooShort { len: usize, need: usize },
    /// FFT sizes must be powers of two.
    NotPowerOfTwo(usize),
    /// Invalid STFT configuration.
    BadStftConfig(&'static str),
    /// Filter bank parameters leave the spectrum uncovered or are malformed.
    BadFilterBank(&'static str),
    /// Generic parameter violation.
    BadParameter(&'static str),
    /// No training data supplied.
    EmptyTrainingSet,
    /// Model/feature descriptors disagree.
    DescriptorMismatch(&'static str),
    /// A model for the requested pyramid level is missing.
    MissingLevel(u32),
    /// Training produced a non-finite loss or gradient.
    NonFinite(&'static str),
    /// Nothing to aggregate.
    EmptyInput,
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::EmptyAudio => write!(f, "audio clip has no samples"),
            Error::NonFiniteSample => write!(f, "audio contains NaN or infinite samples"),
            Error::InvalidSampleRate => write!(f, "sample rate must be positive"),
            Error::ZeroEnergy(what) => write!(f, "{what} has zero energy"),
            Error::SampleRateMismatch(a, b) => {
                write!(f, "sample rates differ: {a} Hz vs {b} Hz")
            }
            Error::ShapeMismatch { expected, got } => write!(
                f,
                "shape mismatch: expected {}x{}, got {}x{}",
                expected.0, expected.1, got.0, got.1
            ),
            Error::ClipTooShort { len, need } => {
                write!(f, "clip too short: {len} samples, need at least {need}")
            }
            Error::NotPowerOfTwo(n) => write!(f, "{n} is not a power of two"),
            Error::BadStftConfig(msg) => write!(f, "invalid STFT config: {msg}"),
            Error::BadFilterBank(msg) => write!(f, "invalid filter bank: {msg}"),
            Error::BadParameter(msg) => write!(f, "invalid parameter: {msg}"),
            Error::EmptyTrainingSet => write!(f, "training set is empty"),
            Error::DescriptorMismatch(msg) => write!(f, "feature descriptor mismatch: {msg}"),
            Error::MissingLevel(level) => write!(f, "no model for pyramid level {level}"),
            Error::NonFinite(what) => write!(f, "non-finite value in {what}"),
            Error::EmptyInput => write!(f, "empty input"),
        }
    }
}

impl core::error::Error for Error {}

pub type Result<T> = core::result::Result<T, Error>;
