use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("word length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },

    #[error("word length {0} exceeds the supported maximum of 64")]
    WordTooLong(usize),

    #[error("a code must contain at least one word")]
    EmptyCode,

    #[error("duplicate word {0}")]
    DuplicateWord(String),

    #[error("word {word:#x} does not fit in {n} bits")]
    WordOutOfRange { word: u64, n: usize },

    #[error("coordinate {coord} is outside 1..={n}")]
    CoordOutOfRange { coord: usize, n: usize },

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("pair is not a verified UDCP")]
    NotVerified,

    #[error("van Tilborg bound violated at distance {d}: {count} > {bound}")]
    VanTilborgViolation { d: usize, count: u64, bound: u128 },

    #[error("code of size {size} is below the required 2^({required_log2:.6})")]
    BelowDensityThreshold { size: usize, required_log2: f64 },

    #[error("{name} = {value} is outside {range}")]
    Domain { name: &'static str, value: f64, range: &'static str },

    #[error("no subset size of {n} coordinates falls in the window [{lo:.6}, {hi:.6}]")]
    EmptyWindow { n: usize, lo: f64, hi: f64 },

    #[error("instance too large: {0}")]
    TooLarge(String),

    #[error("radicand is negative on [{lo:e}, {hi:e}]")]
    NegativeRadicand { lo: f64, hi: f64 },

    #[error("could not certify the inequality on [{lo:e}, {hi:e}]")]
    CertificationFailed { lo: f64, hi: f64 },

    #[error("solver did not converge: {0}")]
    NonConvergence(String),
}

impl Error {
    pub(crate) fn domain(name: &'static str, value: f64, range: &'static str) -> Self {
        Error::Domain { name, value, range }
    }
}
