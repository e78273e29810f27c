use core::fmt;

/// Errors raised by the decision procedures.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Error {
    /// Two objects that must share the index-set size do not.
    DimensionMismatch { expected: usize, found: usize },
    /// A sign vector contained something other than `+1` / `-1`.
    InvalidSign { index: usize },
    /// A full matrix is not symmetric at `(row, col)`.
    NotSymmetric { row: usize, col: usize },
    /// A full matrix has the wrong diagonal value at `index`.
    BadDiagonal { index: usize },
    /// A mixture violates its invariants.
    InvalidMixture(&'static str),
    /// The requested size exceeds a resource cap.
    CapExceeded { n: usize, cap: usize },
    /// The requested size is outside the range an operation supports.
    UnsupportedSize { n: usize, min: usize, max: usize },
    /// The screening bound must be at least one.
    InvalidBound,
    /// A claimed kernel vector is not in the kernel.
    NotAKernel,
    /// A kernel vector needs two nonzero coordinates.
    DegenerateKernel,
    /// The perturbation size must be strictly positive.
    NonPositiveEpsilon,
    /// A rational literal could not be parsed.
    MalformedRational,
    /// Integer arithmetic left the supported range.
    Overflow,
    /// An empty list was passed where at least one element is required.
    Empty,
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::DimensionMismatch { expected, found } => {
                write!(f, "dimension mismatch: expected {expected}, found {found}")
            }
            Error::InvalidSign { index } => write!(f, "sign at position {index} is not +1 or -1"),
            Error::NotSymmetric { row, col } => {
                write!(f, "matrix is not symmetric at ({row}, {col})")
            }
            Error::BadDiagonal { index } => write!(f, "unexpected diagonal value at index {index}"),
            Error::InvalidMixture(why) => write!(f, "invalid mixture: {why}"),
            Error::CapExceeded { n, cap } => write!(f, "size {n} exceeds the configured cap {cap}"),
            Error::UnsupportedSize { n, min, max } => {
                write!(f, "size {n} outside the supported range {min}..={max}")
            }
            Error::InvalidBound => f.write_str("bound must be at least 1"),
            Error::NotAKernel => f.write_str("vector is not in the kernel of the completed matrix"),
            Error::DegenerateKernel => {
                f.write_str("kernel vector must have at least two nonzero coordinates")
            }
            Error::NonPositiveEpsilon => f.write_str("epsilon must be strictly positive"),
            Error::MalformedRational => f.write_str("malformed rational literal"),
            Error::Overflow => f.write_str("integer overflow"),
            Error::Empty => f.write_str("empty input"),
        }
    }
}

impl core::error::Error for Error {}

pub type Result<T> = core::result::Result<T, Error>;
