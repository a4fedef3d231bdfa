use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("invalid cone: {0}")]
    InvalidCone(String),

    #[error("cone has empty interior")]
    EmptyInterior,

    #[error("point is not on the cone boundary")]
    NotOnBoundary,

    #[error("outside cone")]
    OutsideCone,

    #[error("partition gap: no region covers the point")]
    PartitionGap,

    #[error("invalid map: {0}")]
    InvalidMap(String),

    #[error("map is defined only on its cone: {0}")]
    ConeOnlyMap(&'static str),

    #[error("map is not positive: {0}")]
    NotPositive(String),

    #[error("orbit hits kernel at iteration {0}")]
    OrbitHitsKernel(usize),

    #[error("non-finite value encountered during iteration")]
    NonFinite,

    #[error("oracle restricted to low dimension (dim {0} > 3)")]
    OracleDimension(usize),

    #[error("unsupported map variant for {0}")]
    Unsupported(&'static str),

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("zero vector is not allowed here")]
    ZeroVector,

    #[error("wrong stratum: {0}")]
    WrongStratum(String),

    #[error("no positive eigenvalue guaranteed (Bonsall estimate {0})")]
    NoPositiveEigenvalue(f64),

    #[error("map is not certified superadditive")]
    NotSuperadditive,

    #[error("degenerate configuration: {0}")]
    Degenerate(String),

    #[error("checker disagreement: {0}")]
    OracleDisagreement(String),

    #[error("certificate failed: {0}")]
    Certificate(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("schema error at {pointer}: {message}")]
    Schema { pointer: String, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
