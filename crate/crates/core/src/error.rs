use thiserror::Error;

/// Errors raised by the region, quadrature and simulation routines.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// A parameter violated its documented range.
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    /// A covariance matrix was not positive semi-definite.
    #[error("covariance is not positive semi-definite (v11={v11}, v22={v22}, v12={v12})")]
    NotPsd { v11: f64, v22: f64, v12: f64 },

    /// Input sequences of different lengths.
    #[error("sequence length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },

    /// Root finding along a boundary ray failed.
    #[error("boundary bisection did not converge along direction {direction}")]
    BisectionFailed { direction: usize },

    /// A sandwich inclusion that must hold was found violated.
    #[error("rectangle sandwich violated: {0}")]
    SandwichViolation(String),

    /// The rate pair does not sit on the capacity boundary.
    #[error("rate pair ({r1}, {r2}) is not a boundary point of the capacity region")]
    InconsistentBoundaryPoint { r1: f64, r2: f64 },

    /// The correlation parameter is outside the open interval a construction needs.
    #[error("degenerate correlation {rho}: {reason}")]
    DegenerateRho { rho: f64, reason: &'static str },

    /// The approach direction is parallel to the half-plane boundary.
    #[error("approach angle {theta} is parallel to the boundary line (norm diverges)")]
    ParallelApproach { theta: f64 },

    /// Empirical and Gaussian probabilities disagree by more than the Berry-Esseen envelope.
    #[error("Berry-Esseen envelope violated: |{empirical} - {gaussian}| > {envelope}")]
    BerryEsseenViolation {
        empirical: f64,
        gaussian: f64,
        envelope: f64,
    },

    /// Malformed binary sample stream.
    #[error("malformed sample stream: {0}")]
    Stream(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Error {
    Error::InvalidParameter {
        name,
        reason: reason.into(),
    }
}
