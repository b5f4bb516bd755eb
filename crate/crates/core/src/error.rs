use thiserror::Error;

/// Failures raised while building or querying a k-graph and its derived objects.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("missing square for composable pair ({f}, {g})")]
    MissingSquare { f: String, g: String },
    #[error("ambiguous square: pair ({f}, {g}) has two factorization rules")]
    AmbiguousSquare { f: String, g: String },
    #[error("invalid square {detail}")]
    InvalidSquare { detail: String },
    #[error("cubic associativity fails on the triple {triple:?}")]
    AssociativityFailure { triple: Vec<String> },
    #[error("degree {q} is out of range for a path of degree {degree}")]
    OutOfRange { q: String, degree: String },
    #[error("not composable: {0}")]
    NotComposable(String),
    #[error("request leaves the materialized window: {0}")]
    WindowExceeded(String),
    #[error("incoherent nested family at index {0}")]
    IncoherentFamily(usize),
    #[error("paths have different ranges")]
    RangeMismatch,
    #[error("path is not a member of the basic set")]
    NotMember,
    #[error("path is not a boundary path: {0}")]
    NotBoundary(String),
    #[error("range is not an embedded vertex")]
    RangeOutsideEmbedding,
    #[error("graph is not row-finite")]
    NotRowFinite,
    #[error("graph has rank {0}, expected a 1-graph")]
    NotRank1(usize),
    #[error("boundary path space is not finite: {0}")]
    InfiniteBoundary(String),
    #[error("family is not closed under ranges: {0} is missing")]
    RangeClosureViolation(String),
    #[error("no witness found within the window: {0}")]
    NoWitnessInWindow(String),
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("unknown vertex `{0}`")]
    UnknownVertex(String),
    #[error("unknown edge `{0}`")]
    UnknownEdge(String),
    #[error("invalid edge: {0}")]
    InvalidEdge(String),
}

pub type Result<T> = std::result::Result<T, Error>;
