use thiserror::Error;

/// Errors shared across the crate. Hypothesis violations are hard errors,
/// never silently coerced.
#[derive(Debug, Error)]
pub enum Error {
    #[error("zero vector cannot represent a projective point")]
    ZeroVector,

    #[error("points of mixed dimensions: expected {expected}, found {found}")]
    MixedDimensions { expected: usize, found: usize },

    #[error("points do not span a hyperplane (rank {rank} < {needed})")]
    DegenerateSpan { rank: usize, needed: usize },

    #[error("point does not lie on the curve")]
    NotOnCurve,

    #[error("generator is not an n-torsion point: {0}")]
    NotTorsion(String),

    #[error("degenerate configuration: {0}")]
    DegenerateConfig(String),

    #[error("curve is singular (discriminant is zero)")]
    SingularCurve,

    #[error("general position violated: {0}")]
    GeneralPositionViolation(String),

    #[error("grid structure violated: {0}")]
    StructureViolation(String),

    #[error("quadric space dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("combinatorial identity violated: {0}")]
    IdentityViolation(String),

    #[error("point at index {index} does not lie on the quadric space")]
    ContainmentViolation { index: usize },

    #[error("instance too large: {0}")]
    InstanceTooLarge(String),

    #[error("random retries exhausted while {0}")]
    RetriesExhausted(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    #[error("malformed file: {0}")]
    Format(String),
}

pub type Result<T> = std::result::Result<T, Error>;
