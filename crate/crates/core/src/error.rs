use thiserror::Error;

/// Errors surfaced by the exact algebra and the numeric estimators.
#[derive(Debug, Error)]
pub enum CoreError {
    #[error("parse error: {0}")]
    Parse(String),

    #[error("zero polynomial not allowed here")]
    ZeroPolynomial,

    #[error("polynomial does not involve {var}")]
    MissingVariable { var: char },

    #[error("degenerate component `{factor}`: degree in {var} is zero")]
    DegenerateComponent { factor: String, var: char },

    #[error("totally degenerate composition: every factor was dropped")]
    TotallyDegenerateComposition,

    #[error("degree cap {cap} exceeded at order {order} (total bidegree {got})")]
    DegreeCapExceeded { cap: u64, order: u32, got: u64 },

    #[error("fiber solve failed: {0}")]
    FiberSolve(String),

    #[error("orbit sets of mixed lengths")]
    MixedOrbitLengths,

    #[error("unknown root finder `{0}`")]
    UnknownRootFinder(String),

    #[error("invalid input: {0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, CoreError>;
