use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("generator index {index} out of range for rank {rank}")]
    IndexOutOfRange { index: i64, rank: usize },

    #[error("rank mismatch: {left} vs {right}")]
    RankMismatch { left: usize, right: usize },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("invalid automorphism: {0}")]
    InvalidAutomorphism(String),

    #[error("unknown surface `{0}`")]
    UnknownSurface(String),

    #[error("unknown curve `{0}`")]
    UnknownCurve(String),

    #[error("curve `{0}` has no exact twist automorphism")]
    MissingAutomorphism(String),

    #[error("cannot decide equality of linear-only mapping classes")]
    LinearOnly,

    #[error("mapping classes live on different surfaces")]
    SurfaceMismatch,

    #[error("invalid boundary index {index} (surface has {count} boundary components)")]
    InvalidBoundary { index: usize, count: usize },

    #[error("no boundary-parallel curve for boundary {0} in the catalog")]
    MissingBoundaryCurve(usize),

    #[error("pattern mismatch: {0}")]
    PatternMismatch(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("{0}")]
    Unrepresentable(String),

    #[error("invalid surgery: {0}")]
    InvalidSurgery(String),

    #[error("invalid catalog: {0}")]
    InvalidCatalog(String),

    #[error("invalid presentation: {0}")]
    InvalidPresentation(String),
}

pub type Result<T> = std::result::Result<T, Error>;
