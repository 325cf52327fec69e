use core::fmt;

/// Errors raised by channel construction, merging and code design.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// A symbol pair with a negative or non-finite entry.
    NegativeMass { a: f64, b: f64 },
    /// A symbol pair with `a = b = 0`.
    EmptySymbol,
    /// Total probability mass not equal to one.
    MassMismatch { total: f64 },
    /// A channel with no output pairs.
    EmptyChannel,
    IndexOutOfRange { index: usize, len: usize },
    /// The alphabet bound `mu` must allow at least one pair.
    InvalidAlphabetBound(usize),
    /// Upgrading merges need at least three symbols per window.
    InvalidMergeOrder(usize),
    /// Likelihood ratios inside a merge window are out of order.
    LrOrderViolation { position: usize },
    /// Window boundary likelihood ratios coincide.
    DegenerateWindow,
    /// A computed adjustment is negative beyond rounding.
    NegativeAdjustment(f64),
    /// Target block error rate outside `(0, 1)`.
    InvalidTargetBler(f64),
    InvalidParameter(&'static str),
    DimensionMismatch { expected: usize, found: usize },
    /// Brute-force enumeration would exceed the size guard.
    OracleTooLarge { work: u128, limit: u128 },
    /// Merge record does not describe the given pair of channels.
    RecordMismatch,
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::NegativeMass { a, b } => {
                write!(f, "symbol pair ({a}, {b}) has a negative or non-finite entry")
            }
            Error::EmptySymbol => write!(f, "symbol pair has zero mass"),
            Error::MassMismatch { total } => {
                write!(f, "channel mass {total} differs from 1")
            }
            Error::EmptyChannel => write!(f, "channel has no output symbols"),
            Error::IndexOutOfRange { index, len } => {
                write!(f, "index {index} out of range for {len} pairs")
            }
            Error::InvalidAlphabetBound(mu) => {
                write!(f, "alphabet bound mu={mu} must be at least 2")
            }
            Error::InvalidMergeOrder(m) => write!(f, "merge order {m} must be at least 3"),
            Error::LrOrderViolation { position } => {
                write!(f, "likelihood ratios out of order at window position {position}")
            }
            Error::DegenerateWindow => write!(f, "window boundary likelihood ratios are equal"),
            Error::NegativeAdjustment(v) => {
                write!(f, "negative merge adjustment {v} (likelihood-ratio ordering violated)")
            }
            Error::InvalidTargetBler(e) => {
                write!(f, "target block error rate {e} must lie in (0, 1)")
            }
            Error::InvalidParameter(what) => write!(f, "invalid parameter: {what}"),
            Error::DimensionMismatch { expected, found } => {
                write!(f, "dimension mismatch: expected {expected}, found {found}")
            }
            Error::OracleTooLarge { work, limit } => {
                write!(f, "brute-force enumeration of {work} terms exceeds limit {limit}")
            }
            Error::RecordMismatch => write!(f, "merge record does not match the channels"),
        }
    }
}

impl core::error::Error for Error {}
