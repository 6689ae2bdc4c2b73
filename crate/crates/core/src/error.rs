use thiserror::Error;

/// Errors shared by every module of the crate.
#[derive(Debug, Error)]
pub enum Error {
    /// Model parameters violate a structural invariant (determinant, trace,
    /// Euler characteristic, ...).
    #[error("invalid model: {0}")]
    InvalidModel(String),

    /// An argument lies outside the domain an operation is defined on.
    #[error("domain error: {0}")]
    Domain(String),

    /// Evaluation requested at (or numerically on top of) a pole.
    #[error("pole: {0}")]
    Pole(String),

    /// The evaluation point is inside or on the boundary of the divergence
    /// region of an orbit series.
    #[error("Re(s) = {re_s} is not inside the convergence region (requires Re(s) > {required})")]
    OutsideConvergenceRegion { re_s: f64, required: f64 },

    /// A regularized-product argument lands exactly on the branch cut of the
    /// Arg ∈ (−π, π] convention.
    #[error("branch ambiguity: {0}")]
    BranchAmbiguity(String),

    /// Not enough data to carry out an estimate.
    #[error("insufficient data: {0}")]
    InsufficientData(String),

    /// An exact integer quantity does not fit the requested width.
    #[error("integer overflow: {0}")]
    Overflow(String),

    /// Two independent evaluation routes of the same quantity disagree beyond
    /// their stated tolerance.  Indicates a defect, not a user error.
    #[error("internal consistency check failed: {0}")]
    Consistency(String),

    #[error("serialization: {0}")]
    Serialization(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
