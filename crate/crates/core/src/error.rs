use thiserror::Error;

/// Errors raised by every fallible operation in the crate.
///
/// Variant names double as stable error tags (see [`Error::tag`]) so that
/// front ends can report them without parsing messages.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("empty input")]
    Empty,

    #[error("probabilities must be finite and non-negative (index {index}: {value})")]
    InvalidProbability { index: usize, value: f64 },

    #[error("not normalized: sum = {sum}")]
    NotNormalized { sum: f64 },

    #[error("shape {shape:?} does not match {len} entries")]
    ShapeMismatch { shape: Vec<usize>, len: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("insufficient data: need at least {needed}, got {got}")]
    InsufficientData { needed: usize, got: usize },

    #[error("sample mean is zero; ratio statistics are undefined")]
    DegenerateMean,

    #[error("axis {axis} out of range for rank {rank}")]
    AxisOutOfRange { axis: usize, rank: usize },

    #[error("operation requires rank {expected}, table has rank {got}")]
    RankMismatch { expected: String, got: usize },

    #[error("symbol {symbol} out of range for alphabet of size {size}")]
    SymbolOutOfRange { symbol: usize, size: usize },

    #[error("conditioning event has zero probability")]
    ZeroConditioningEvent,

    #[error("negative rate {0}")]
    NegativeRate(f64),

    #[error("history length {got} does not match model order {expected}")]
    HistoryLengthMismatch { expected: usize, got: usize },

    #[error("need at least 2 spikes, got {0}")]
    InsufficientSpikes(usize),

    #[error("spike times must be strictly increasing and lie in [0, T)")]
    InvalidSpikeTimes,

    #[error("information content of a zero-probability event is unbounded")]
    ZeroProbability,

    #[error("marginal probability of a pmi argument is zero")]
    ZeroMarginal,

    #[error("support violation: p > 0 where q = 0 (divergence is infinite)")]
    SupportViolation,

    #[error("models belong to different families")]
    FamilyMismatch,

    #[error("unsupported family: {0}")]
    UnsupportedFamily(&'static str),

    #[error("normalizing entropy is zero")]
    DegenerateEntropy,

    #[error("channel row {row} is not a probability distribution")]
    NonStochasticChannel { row: usize },

    #[error("sample is empty")]
    EmptySample,

    #[error("sample {value} outside the binning range")]
    OutOfRangeSample { value: f64 },

    #[error("degenerate binning: {0}")]
    DegenerateRange(String),

    #[error("length mismatch: {0} vs {1}")]
    LengthMismatch(usize, usize),

    #[error("series too short: need more than {needed} symbols, got {got}")]
    SeriesTooShort { needed: usize, got: usize },

    #[error("table with {cells} cells exceeds the limit of {limit}")]
    TableTooLarge { cells: u128, limit: usize },

    #[error("bin {bin} holds more than one spike; use a smaller bin width")]
    MultiSpikeBin { bin: usize },

    #[error("bin width must be positive, got {0}")]
    NonpositiveBinWidth(f64),

    #[error("spike count {r} exceeds number of bins {n}")]
    InvalidRate { n: u64, r: u64 },

    #[error("mean count must be positive, got {0}")]
    NonpositiveMean(f64),

    #[error("spike count is zero")]
    ZeroSpikes,

    #[error("block length {block} invalid for series of length {len}")]
    BadBlockLength { block: usize, len: usize },

    #[error("at least {min} surrogates required, got {got}")]
    TooFewSurrogates { min: usize, got: usize },
}

impl Error {
    /// Stable identifier for the error kind.
    pub fn tag(&self) -> &'static str {
        match self {
            Error::Empty => "Empty",
            Error::InvalidProbability { .. } => "InvalidProbability",
            Error::NotNormalized { .. } => "NotNormalized",
            Error::ShapeMismatch { .. } => "ShapeMismatch",
            Error::InvalidParameter(_) => "InvalidParameter",
            Error::InsufficientData { .. } => "InsufficientData",
            Error::DegenerateMean => "DegenerateMean",
            Error::AxisOutOfRange { .. } => "AxisOutOfRange",
            Error::RankMismatch { .. } => "RankMismatch",
            Error::SymbolOutOfRange { .. } => "SymbolOutOfRange",
            Error::ZeroConditioningEvent => "ZeroConditioningEvent",
            Error::NegativeRate(_) => "NegativeRate",
            Error::HistoryLengthMismatch { .. } => "HistoryLengthMismatch",
            Error::InsufficientSpikes(_) => "InsufficientSpikes",
            Error::InvalidSpikeTimes => "InvalidSpikeTimes",
            Error::ZeroProbability => "ZeroProbability",
            Error::ZeroMarginal => "ZeroMarginal",
            Error::SupportViolation => "SupportViolation",
            Error::FamilyMismatch => "FamilyMismatch",
            Error::UnsupportedFamily(_) => "UnsupportedFamily",
            Error::DegenerateEntropy => "DegenerateEntropy",
            Error::NonStochasticChannel { .. } => "NonStochasticChannel",
            Error::EmptySample => "EmptySample",
            Error::OutOfRangeSample { .. } => "OutOfRangeSample",
            Error::DegenerateRange(_) => "DegenerateRange",
            Error::LengthMismatch(..) => "LengthMismatch",
            Error::SeriesTooShort { .. } => "SeriesTooShort",
            Error::TableTooLarge { .. } => "TableTooLarge",
            Error::MultiSpikeBin { .. } => "MultiSpikeBin",
            Error::NonpositiveBinWidth(_) => "NonpositiveBinWidth",
            Error::InvalidRate { .. } => "InvalidRate",
            Error::NonpositiveMean(_) => "NonpositiveMean",
            Error::ZeroSpikes => "ZeroSpikes",
            Error::BadBlockLength { .. } => "BadBlockLength",
            Error::TooFewSurrogates { .. } => "TooFewSurrogates",
        }
    }
}

pub type Result<T> = core::result::Result<T, Error>;
