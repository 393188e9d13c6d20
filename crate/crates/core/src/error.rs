use thiserror::Error;

/// Errors raised by the numerical kernels.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid lattice spec: {0}")]
    InvalidSpec(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("quadratic form ({a}, {b}, {c}) is not positive definite")]
    NotPositiveDefinite { a: f64, b: f64, c: f64 },

    #[error("integrand is singular at ({x}, {y}): psi = {value:e}")]
    SingularPoint { x: f64, y: f64, value: f64 },

    #[error("dilogarithm argument {re} + {im}i lies on the branch cut [1, inf)")]
    CutViolation { re: f64, im: f64 },

    #[error("Kummer angle is undefined at r = 1, theta = {theta}")]
    DegeneratePoint { theta: f64 },

    #[error("eta requires Im(tau) > 0, got {im}")]
    LowerHalfPlane { im: f64 },

    #[error("digamma pole at z = {0}")]
    PoleAt(f64),

    #[error("adaptive quadrature stopped after {evaluations} evaluations: error {achieved:e} > target {target:e}")]
    ToleranceNotMet {
        evaluations: usize,
        achieved: f64,
        target: f64,
    },

    #[error("residual fit needs at least {needed} samples, got {got}")]
    InsufficientSamples { needed: usize, got: usize },

    #[error("torus graph for n = {n} is degenerate: {reason}")]
    DegenerateGraph { n: usize, reason: String },
}

pub type Result<T> = std::result::Result<T, Error>;
