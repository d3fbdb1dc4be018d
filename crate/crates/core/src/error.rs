use thiserror::Error;

/// Errors shared across the crate. Constructors validate eagerly, so most
/// functions that take already-validated values only fail on the mismatch
/// variants.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("self-loop {0} -> {0} is not allowed")]
    SelfLoop(String),
    #[error("vertex `{0}` is not declared")]
    UnknownVertex(String),
    #[error("vertex `{0}` is declared twice")]
    DuplicateVertex(String),
    #[error("digraph has no basepoint but one is required")]
    NotBased,
    #[error("basepoint of the source must map to the basepoint of the target")]
    BasepointMismatch,
    #[error("map violates arrow {from} -> {to}: images are neither equal nor an arrow")]
    MapViolation { from: String, to: String },
    #[error("assignment is missing a value for vertex `{0}`")]
    MissingVertex(String),
    #[error("sub-digraph is not contained in the ambient digraph (offending {0})")]
    PairNotSub(String),
    #[error("basepoint would be dropped by the vertex selection")]
    BasepointDropped,

    #[error("domain mismatch: {0}")]
    DomainMismatch(String),
    #[error("endpoint mismatch: first path ends at `{0}`, second starts at `{1}`")]
    EndpointMismatch(String, String),
    #[error("length parity violation: {0}")]
    ParityViolation(String),
    #[error("requested length {requested} is shorter than the current length {current}")]
    LengthTooShort { requested: usize, current: usize },
    #[error("line digraph is not standard where a standard one is required")]
    NotStandard,
    #[error("path is not based at the target basepoint")]
    NotBasedPath,

    #[error("boundary violation at grid index {0:?}: value must be the basepoint")]
    BoundaryViolation(Vec<u32>),
    #[error("grid map violation at index {index:?} along axis {axis}")]
    GridMapViolation { index: Vec<u32>, axis: usize },
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("truncated loop digraph is missing the class `{0}`")]
    TruncationTooSmall(String),
    #[error("no common representative length found within bound {0}")]
    IrreconcilableRepresentatives(usize),

    #[error("maps do not share the required digraph (source/target disagree)")]
    TargetMismatch,

    #[error("derived digraph exceeds the size cap: {count} > {cap}")]
    SizeOverflow { count: usize, cap: usize },
    #[error("truncated constructions disagree on included vertices: {0}")]
    TruncationMismatch(String),

    #[error("certificate failed re-verification: {0}")]
    CertificateInvalid(String),

    #[error("parse error at line {line}: {reason}")]
    ParseError { line: usize, reason: String },
}

pub type Result<T> = std::result::Result<T, Error>;
