use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid break sequence: {0}")]
    InvalidBreaks(String),

    #[error("invalid spline space: {0}")]
    InvalidSpace(String),

    #[error("constrained spline space is empty (all {raw_dim} raw degrees of freedom constrained)")]
    EmptySpace { raw_dim: usize },

    #[error("abscissa {x} lies outside [{a}, {b}]")]
    OutOfDomain { x: f64, a: f64, b: f64 },

    #[error("derivative order {order} exceeds the available maximum {max}")]
    DerivativeOrder { order: usize, max: usize },

    #[error("matrix is not positive definite at pivot {pivot}")]
    NotPositiveDefinite { pivot: usize },

    #[error("matrix is singular at pivot {pivot}")]
    Singular { pivot: usize },

    #[error("matrix is not symmetric (asymmetry {asymmetry:e} relative to norm {norm:e})")]
    NotSymmetric { asymmetry: f64, norm: f64 },

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("iteration did not converge: {0}")]
    NoConvergence(String),

    #[error("hypothesis violated: {0}")]
    Hypothesis(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("unknown function `{0}`")]
    UnknownFunction(String),

    #[error("{0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;
