use thiserror::Error;

/// Errors raised while reading an instance, tour or triangulation file.
///
/// Every variant names the 1-based line number it was detected on.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum ParseError {
    #[error("line {line}: malformed header {found:?}")]
    MalformedHeader { line: usize, found: String },
    #[error("line {line}: non-numeric entry {token:?}")]
    NonNumeric { line: usize, token: String },
    #[error("line {line}: vertex count must be at least 3, got {n}")]
    TooFewVertices { line: usize, n: usize },
    #[error("line {line}: diagonal must be inf")]
    FiniteDiagonal { line: usize },
    #[error("line {line}: off-diagonal entry {token:?} must be finite and non-negative")]
    InvalidEntry { line: usize, token: String },
    #[error("line {line}: duplicate point (same coordinates as vertex {first})")]
    DuplicatePoint { line: usize, first: usize },
    #[error("line {line}: expected {expected} fields, found {found}")]
    WrongFieldCount {
        line: usize,
        expected: usize,
        found: usize,
    },
    #[error("line {line}: unexpected end of input")]
    Truncated { line: usize },
    #[error("line {line}: unexpected trailing content")]
    TrailingContent { line: usize },
    #[error("line {line}: vertex label {label} out of range 1..={n}")]
    LabelOutOfRange { line: usize, label: usize, n: usize },
    #[error("line {line}: {msg}")]
    Invalid { line: usize, msg: String },
}

#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("invalid instance: {0}")]
    InvalidInstance(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("n = {n} exceeds the enumeration guard ({limit}); pass force to override")]
    GuardExceeded { n: usize, limit: usize },
    #[error("vertex {vertex} out of range for n = {n}")]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("size mismatch: expected n = {expected}, got {found}")]
    SizeMismatch { expected: usize, found: usize },
    #[error("all points are collinear")]
    Collinear,
    #[error("tour not simple")]
    TourNotSimple,
    #[error("degenerate geometry: {0}")]
    Degenerate(String),
    #[error("isolated vertex {0}")]
    IsolatedVertex(usize),
    #[error("edge {from} -> {to} absent from the sorted cost matrix")]
    EdgeAbsent { from: usize, to: usize },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
