use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("signal has no samples")]
    EmptySignal,

    #[error("sample rate must be finite and positive, got {0}")]
    InvalidSampleRate(String),

    #[error("sample {index} is not a finite number")]
    NonFiniteSample { index: usize },

    #[error("quantization scale must be at least 1")]
    InvalidScale,

    #[error("sample {index} exceeds the 32-bit integer range at scale {scale}; lower the scale")]
    RangeOverflow { index: usize, scale: u32 },

    #[error("region length must be positive and even, got {0}")]
    InvalidRegionLength(usize),

    #[error("region [{offset}, {offset}+{length}) exceeds signal length {signal_len}")]
    RegionOutOfBounds {
        offset: usize,
        length: usize,
        signal_len: usize,
    },

    #[error("length mismatch: expected {expected}, got {actual}")]
    LengthMismatch { expected: usize, actual: usize },

    #[error("signals differ in scale or sample rate")]
    IncompatibleSignals,

    #[error("region holds {pairs} pairs but {bits} watermark bits were given")]
    CapacityMismatch { pairs: usize, bits: usize },

    /// Indices are pair indices within the region. A single-pair embed
    /// reports an empty list.
    #[error("difference expansion overflows the sample range at pair(s) {pairs:?}")]
    ExpansionOverflow { pairs: Vec<usize> },

    #[error("blink statistics need at least 2 blinks, found {found}")]
    InsufficientBlinks { found: usize },

    #[error("blink times must be finite and strictly increasing")]
    UnorderedBlinkTimes,

    #[error("blink detector needs threshold k > 0 and refractory >= 0")]
    InvalidDetectorConfig,

    #[error("value {0} is not finite as binary32")]
    NotFinite(String),

    #[error("expected {expected} bits, got {actual}")]
    WrongLength { expected: usize, actual: usize },

    #[error("bit strings must not be empty")]
    EmptyBits,

    #[error("invalid bit character {0:?}")]
    InvalidBitChar(char),

    #[error("original signal has zero power")]
    ZeroSignal,

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
}

pub type Result<T> = std::result::Result<T, Error>;
