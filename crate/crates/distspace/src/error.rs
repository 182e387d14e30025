use crate::geometry::FeasibilityReport;

/// Errors produced by the distance-geometry operations.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid point configuration: {0}")]
    InvalidConfiguration(String),

    #[error("invalid distance data: {0}")]
    InvalidDistances(String),

    #[error("points {i} and {j} coincide (distance {dist:.3e} below tolerance)")]
    DuplicatePoint { i: usize, j: usize, dist: f64 },

    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("distances are not realizable in dimension {dimension}")]
    NotRealizable {
        dimension: usize,
        report: FeasibilityReport,
    },

    #[error("degenerate (rank-deficient) configuration rejected in strict mode")]
    DegenerateEmbedding,

    #[error("solver did not converge: final residual {residual:.3e} after {iterations} iterations")]
    SolverDiverged { residual: f64, iterations: usize },

    #[error("constraint system has no positive real solution")]
    NoSolution,

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("constructed pair is congruent (accidental symmetry); adjust parameters")]
    CongruentPair,

    #[error("enumeration budget of {budget} evaluations exceeded")]
    BudgetExceeded { budget: u64 },

    #[error("brute-force scope exceeded: n = {n} is above the cap of {cap}")]
    ScopeExceeded { n: usize, cap: usize },

    #[error("cell reconstruction failed: no candidate simplex assembly reproduces the spectrum")]
    ReconstructionFailed,

    #[error("resampling cap reached: spread too large for a realizable simplex")]
    SpreadTooLarge,

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
