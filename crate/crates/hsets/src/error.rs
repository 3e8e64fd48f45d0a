use thiserror::Error;

use crate::lp::LpStatus;

/// Crate-wide error type.
#[derive(Debug, Error)]
pub enum Error {
    #[error("matrix is not symmetric (max asymmetry {0:.3e})")]
    NotSymmetric(f64),
    #[error("matrix is not positive definite")]
    NotPositiveDefinite,
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("degenerate point set (duplicate or near-duplicate points); choose another seed or perturb the points")]
    DegeneratePoints,
    #[error("evaluation point is too close to an interpolation point")]
    PointTooClose,
    #[error("empty input: {0}")]
    EmptyInput(&'static str),
    #[error("simplex iteration limit of {0} reached; the problem data is likely ill-conditioned")]
    MaxIterations(usize),
    #[error("linear program ended with unexpected status {0:?}")]
    UnexpectedLpStatus(LpStatus),
    #[error("minimax residual has no extremal support (data is exactly representable)")]
    EmptySupport,
    #[error("signed point set is not a certified H-set")]
    NotAnHSet,
    #[error("certificate does not match the given kernel, centers, and candidate set")]
    CertificateMismatch,
    #[error("sign vector entries must be +1 or -1 (found {0})")]
    InvalidSigns(f64),
    #[error(
        "no points selected: threshold {threshold} exceeds the largest residual {max_residual}"
    )]
    EmptySelection { threshold: f64, max_residual: f64 },
    #[error("candidate pool exhausted after {0} selections")]
    ExhaustedCandidates(usize),
    #[error("invalid configuration: {0}")]
    InvalidConfig(&'static str),
    #[error("numerical breakdown: {0}")]
    Numerical(&'static str),
    #[error("parse error: {0}")]
    Parse(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
