//! Crate-wide error type.

use thiserror::Error;

/// Errors surfaced by the numerical routines and the CLI plumbing.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// Input outside a function's domain.
    #[error("domain error: {0}")]
    Domain(String),

    /// Lerch shift parameter hit a pole of the transcendent.
    #[error("singular Lerch shift a = {a}: a must not be a non-positive integer")]
    SingularShift { a: f64 },

    /// Series parameter outside the convergence region.
    #[error("series does not converge for z = {z}: need z in [0, 1)")]
    NonConvergent { z: f64 },

    /// Asymptotic expansion requested outside its useful regime.
    #[error("asymptotic expansion unusable: first dropped term {tail:e} exceeds |value| {value:e}")]
    AsymptoticAccuracy { tail: f64, value: f64 },

    /// Closed forms only exist in d = 4 for the quadratic and fermionic couplings.
    #[error("unsupported dimension d = {d} for {coupling} coupling")]
    UnsupportedDimension { d: u32, coupling: &'static str },

    /// Evaluation point too close to a correlator pole.
    #[error("evaluation point within {dist:e} of a correlator singularity")]
    NearSingularity { dist: f64 },

    /// Response functions require a positive switching duration.
    #[error("invalid duration y = {y}: need y > 0")]
    InvalidDuration { y: f64 },

    /// Duration sits on a resonance y = 2*pi*k of the closed forms.
    #[error("resonance: y = {y} within {tol} of 2*pi*{k}")]
    Resonance { y: f64, k: u32, tol: f64 },

    /// Detailed-balance denominator vanished while closing the cycle.
    #[error("degenerate cycle: detailed-balance denominator vanished")]
    DegenerateCycle,

    /// Adaptive quadrature failed to meet its tolerance.
    #[error("quadrature did not converge: {0}")]
    QuadratureNonConvergent(String),

    /// The epsilon -> 0 extrapolation cannot be trusted.
    #[error("epsilon extrapolation unstable: {reason}")]
    ExtrapolationUnstable { reason: String },

    /// A sweep/validation specification failed validation.
    #[error("invalid spec: {0}")]
    InvalidSpec(String),

    /// One or more validation checks exceeded tolerance.
    #[error("validation failed: {0}")]
    ValidationFailed(String),

    /// Filesystem error while emitting datasets.
    #[error("io error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
