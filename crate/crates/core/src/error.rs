use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid interval [{a}, {b}]: endpoints must be finite with a < b")]
    InvalidInterval { a: f64, b: f64 },

    #[error("point {x} lies outside the domain [{a}, {b}]")]
    Domain { x: f64, a: f64, b: f64 },

    #[error("domain requirement violated: {0}")]
    DomainRequirement(String),

    #[error("kernel domain [{ka}, {kb}] does not match function domain [{fa}, {fb}]")]
    DomainMismatch { fa: f64, fb: f64, ka: f64, kb: f64 },

    #[error("points must be strictly ordered x1 < x2 < x3, got ({0}, {1}, {2})")]
    Order(f64, f64, f64),

    #[error("constraint violated: {0}")]
    Constraint(String),

    #[error("length mismatch: {weights} weights but {points} points")]
    LengthMismatch { weights: usize, points: usize },

    #[error("invalid weights: {0}")]
    InvalidWeights(String),

    #[error("tolerance must be positive, got {0}")]
    Tolerance(f64),

    #[error("invalid parameter: {0}")]
    Parameter(String),

    #[error("invalid generator range: {0}")]
    Range(String),

    #[error("no convergence: {0}")]
    Convergence(String),

    #[error("non-finite value {value} at t = {at}")]
    NonFinite { at: f64, value: f64 },

    #[error("cross-check failed: {0}")]
    CrossCheck(String),

    #[error("function is not convex: {0}")]
    NotConvex(String),

    #[error("negative kernel value {value} at t = {at}")]
    NegativeKernel { at: f64, value: f64 },

    #[error("malformed samples: {0}")]
    Samples(String),

    #[error("cannot read {path}: {message}")]
    Io { path: PathBuf, message: String },
}
