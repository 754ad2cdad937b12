use thiserror::Error;

/// Errors raised by geometric primitives, solvers and the file layer.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("coordinate is not finite")]
    NonFinite,

    #[error("radius must be a finite nonnegative number, got {0}")]
    InvalidRadius(f64),

    #[error("convex hull of an empty generator list")]
    EmptyHull,

    #[error("angle is undefined when a ray endpoint coincides with the vertex")]
    DegenerateAngle,

    #[error("problem has no balls")]
    EmptyProblem,

    #[error("construction requires {0}")]
    Unsupported(String),

    #[error("{0}")]
    Hypothesis(String),

    #[error("no real tangent ball for this configuration")]
    NoTangentBall,

    #[error("centers are collinear and the tangency system is rank deficient")]
    RankDeficient,

    #[error("centers of balls {0} and {1} coincide")]
    CoincidentCenters(usize, usize),

    #[error("expected exactly three balls, got {0}")]
    WrongCount(usize),

    #[error("schema error at {path}: {message}")]
    Schema { path: String, message: String },

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
