use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("point lies outside the injectivity ball: distance {distance} >= radius {radius}")]
    OutOfInjectivityBall { distance: f64, radius: f64 },

    #[error("derivative is numerically singular (condition number {condition:e})")]
    SingularDerivative { condition: f64 },

    #[error("jet coefficients diverged at order {order}")]
    JetDivergence { order: usize },

    #[error("no known root was supplied")]
    MissingRoot,

    #[error("degenerate basin radius: gamma is infinite")]
    DegenerateRadius,

    #[error("spreading constant is unbounded on this manifold; use the alternative radius")]
    UnboundedSpreading,

    #[error("point is not a zero: beta = {beta:e}")]
    NotAZero { beta: f64 },

    #[error("matrix is not symmetric (asymmetry {asymmetry:e})")]
    NotSymmetric { asymmetry: f64 },

    #[error("input matrix is singular")]
    SingularInput,

    #[error("unknown problem id `{0}`")]
    UnknownProblem(String),

    #[error("invalid manifold identifier `{0}`")]
    InvalidManifold(String),

    #[error("invalid point: {0}")]
    InvalidPoint(String),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
