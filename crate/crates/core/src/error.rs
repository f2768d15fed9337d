use thiserror::Error;

/// Errors raised by validation and by the criteria engine.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not a prime")]
    NotPrime(String),
    #[error("q = {p}^{levels} exceeds the supported range")]
    ModulusTooLarge { p: String, levels: u32 },
    #[error("{what} = {value} is out of range ({expected})")]
    OutOfRange {
        what: &'static str,
        value: String,
        expected: String,
    },
    #[error("b must be coprime to p (b = {b}, p = {p})")]
    NotCoprime { b: String, p: String },
    #[error("expected {expected} Ω valuations (one per generator), got {got}")]
    OmegaLength { expected: usize, got: usize },
    #[error("Ω valuations must start with v(Ω_0) = 0, got {0}")]
    OmegaNormalization(String),
    #[error("Ω valuations must be <= 0, got v(Ω_{index}) = {value}")]
    OmegaPositive { index: usize, value: String },
    #[error("Ω valuations must be non-increasing, but v(Ω_{index}) = {value} > v(Ω_{prev}) = {prev_value}", prev = index - 1)]
    OmegaNotMonotone {
        index: usize,
        value: String,
        prev_value: String,
    },
    #[error("arithmetic overflow while computing {0}")]
    Overflow(&'static str),
    #[error("coefficient profile has length {got}, expected q = {expected}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("converse search needs n >= 2, got n = {0}")]
    ConverseLevel(u32),
    #[error("criteria disagree for c = {c}: {detail}")]
    ConsistencyAlarm { c: String, detail: String },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn out_of_range(
    what: &'static str,
    value: impl ToString,
    expected: impl Into<String>,
) -> Error {
    Error::OutOfRange {
        what,
        value: value.to_string(),
        expected: expected.into(),
    }
}
