use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("index {index} out of range for {len} items")]
    IndexOutOfRange { index: usize, len: usize },

    #[error("parse error: {0}")]
    Parse(String),

    #[error("weights must be positive, need ≥ 3 (got {0})")]
    InvalidWeights(String),

    #[error("generator is not a homogeneous linear form: {0}")]
    NonLinearGenerator(String),

    #[error("unknown variable {0:?}")]
    UnknownVariable(String),

    #[error("cannot invert non-monomial image of {0:?}")]
    NonInvertibleSubstitution(String),

    #[error("ground set of size {0} exceeds the enumeration cap of 16")]
    GroundTooLarge(usize),

    #[error("initial ideal depends on the order of the weight rows (non-monomial face)")]
    NonMonomialFace,

    #[error("bundle is not monomial: {0}")]
    NotMonomial(String),

    #[error("invalid subset: {0}")]
    InvalidSubset(String),

    #[error("leaf count {0} outside the supported range 4..=7")]
    LeafCountOutOfRange(usize),

    #[error("invalid flag: {0}")]
    InvalidFlag(String),

    #[error("tropical membership violated: {0}")]
    TropicalViolation(String),

    #[error("resource cap exceeded: {0}")]
    ResourceCap(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("polyhedron is unbounded")]
    Unbounded,

    #[error("verification failed: {0}")]
    VerificationFailed(String),
}

pub type Result<T> = std::result::Result<T, Error>;
