//! Error type shared by every module of the crate.

use thiserror::Error;

/// Crate-wide error enum. Variants mirror the failure modes of the public
/// operations; messages name the violated invariant and the offending value.
#[derive(Debug, Error)]
pub enum Error {
    /// Two functions that must share a grid do not.
    #[error("grid mismatch: {0}")]
    GridMismatch(String),

    /// A cell-index set refers to cells outside its grid.
    #[error("invalid set: {0}")]
    InvalidSet(String),

    /// A sub-box or shift vector is not aligned to cell boundaries.
    #[error("alignment error: {0}")]
    Alignment(String),

    /// An evaluation point lies outside the admissible domain.
    #[error("domain error: {0}")]
    Domain(String),

    /// A super-level threshold was negative.
    #[error("invalid threshold: level-set cutoff must be >= 0, got {0}")]
    InvalidThreshold(f64),

    /// A probe or feature is finer than the grid can resolve.
    #[error("resolution error: {0}")]
    Resolution(String),

    /// A set sequence violates the nesting / shrinking contract.
    #[error("invalid sequence: {0}")]
    InvalidSequence(String),

    /// Parameters do not define a valid space (e.g. a divergent defining
    /// integral for the weighted indicator-norm function).
    #[error("invalid spec: {0}")]
    InvalidSpec(String),

    /// An integral or supremum is infinite where a finite value is required.
    #[error("divergent: {0}")]
    Divergent(String),

    /// The requested check only applies under stronger hypotheses.
    #[error("not applicable: {0}")]
    NotApplicable(String),

    /// Too few points (or degenerate data) for a least-squares fit.
    #[error("fit error: {0}")]
    Fit(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
