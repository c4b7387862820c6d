use thiserror::Error;

/// Failures raised by the geometry kernel and the approximation pipeline.
#[derive(Debug, Error)]
pub enum Error {
    #[error("half-space intersection is unbounded")]
    UnboundedCell,
    #[error("half-space intersection is empty")]
    EmptyCell,
    #[error("degenerate facet: {0}")]
    DegenerateFacet(String),
    #[error("facet overlay failed: {0}")]
    OverlayFailure(String),
    #[error("no admissible chart radius >= {r_min:e} at this point (cap {cap:e})")]
    JunctionTooClose { r_min: f64, cap: f64 },
    #[error("uncovered jump mass {achieved:e} exceeds budget {budget:e}")]
    BudgetInfeasible { achieved: f64, budget: f64 },
    #[error("inverse iteration diverged at ({0})")]
    InverseDivergence(String),
    #[error("grid spacing too large: {0}")]
    SpacingTooLarge(String),
    #[error("flat piece {0} is too close to the bounding box")]
    PieceNearBoundary(usize),
    #[error("quadrature did not converge (last relative change {0:e})")]
    QuadratureNotConverged(f64),
    #[error("degenerate domain: {0}")]
    DegenerateDomain(String),
    #[error("tubular map is not injective down to thickness {0:e}")]
    InjectivityFailure(f64),
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse(e.to_string())
    }
}

impl From<csv::Error> for Error {
    fn from(e: csv::Error) -> Self {
        Error::Parse(e.to_string())
    }
}
