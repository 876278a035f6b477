use thiserror::Error;

/// Errors raised across the library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum GapError {
    #[error("degenerate domain: {0}")]
    DegenerateDomain(String),
    #[error("invalid polygon: {0}")]
    InvalidPolygon(String),
    #[error("chord is not contained in the polygon")]
    InvalidChord,
    #[error("cut line misses the interior of the polygon")]
    EmptyCut,
    #[error("John ellipse solve failed (residual {residual:e})")]
    JohnSolveFailed { residual: f64 },
    #[error("eigensolver failed: {0}")]
    SolverFailed(String),
    #[error("grid too coarse: {0}")]
    ResolutionError(String),
    #[error("weight is not log-concave (worst second difference {worst:e})")]
    NotLogConcave { worst: f64 },
    #[error("weight vanishes on a set of positive measure")]
    DegenerateWeight,
    #[error("empty finiteness domain")]
    EmptyDomain,
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("fit underdetermined: need at least {needed} points, got {got}")]
    FitUnderdetermined { needed: usize, got: usize },
}

pub type Result<T> = std::result::Result<T, GapError>;
