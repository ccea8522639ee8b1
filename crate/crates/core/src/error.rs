use thiserror::Error;

use crate::geometry::MeasureTag;

/// Errors produced anywhere in the library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("invalid point: {0}")]
    InvalidPoint(String),

    #[error("gamma must be finite and strictly positive, got {0}")]
    InvalidGamma(f64),

    #[error("unsupported density conversion {from:?} -> {to:?}")]
    UnsupportedPair { from: MeasureTag, to: MeasureTag },

    #[error("reference weight is singular at {0}")]
    SingularWeight(String),

    #[error("invalid quadrature configuration: {0}")]
    InvalidConfig(String),

    #[error(
        "quadrature did not converge: value {value:e}, error estimate {error_estimate:e} \
         after {panels} panels"
    )]
    NoConvergence {
        value: f64,
        error_estimate: f64,
        panels: usize,
    },

    #[error("integrand returned {value} at {at}")]
    NonFiniteF { at: f64, value: f64 },

    #[error("density {value:e} is negative beyond its error estimate {error_estimate:e}")]
    NegativeDensity { value: f64, error_estimate: f64 },

    #[error("result is not representable: {0}")]
    NonFinite(String),

    #[error("invalid simulation plan: {0}")]
    InvalidPlan(String),

    #[error("resource guard tripped: {0}")]
    ResourceGuard(String),

    #[error("angular clock overflow on path {path}")]
    ClockOverflow { path: usize },

    #[error("sample is empty")]
    EmptySample,

    #[error("bin edges must be finite, strictly increasing and at least two")]
    UnsortedEdges,

    #[error("at least {required} samples are required, got {got}")]
    InsufficientSamples { required: usize, got: usize },

    #[error("unsupported point pattern: {0}")]
    UnsupportedPattern(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
