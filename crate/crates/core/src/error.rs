use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid point: {0}")]
    InvalidPoint(String),
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("chart coordinate {0} is zero")]
    ZeroChart(usize),
    #[error("points coincide")]
    SamePoint,
    #[error("invalid curve: {0}")]
    InvalidCurve(String),
    #[error("classes live in different lattices")]
    LatticeMismatch,
    #[error("gram matrix is singular")]
    SingularGram,
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("invalid configuration: {0}")]
    InvalidConfiguration(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("degenerate cone: {0}")]
    DegenerateCone(String),
    #[error("rank {0} exceeds the cap of {1}")]
    RankCap(usize, usize),
    #[error("point lies in the base locus: {0}")]
    BaseLocus(String),
    #[error("divisor is not ample: {0}")]
    NotAmple(String),
    #[error("candidate catalog is empty")]
    EmptyCatalog,
    #[error("insufficient data: {0}")]
    Insufficient(String),
    #[error("unknown preset: {0}")]
    UnknownPreset(String),
    #[error("no disjointness fact recorded for {0}")]
    MissingFact(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
