use thiserror::Error;

/// Errors produced by the Laguerre model core.
#[derive(Debug, Error)]
pub enum Error {
    #[error("parameter list must not be empty")]
    EmptyParameterList,

    #[error("alpha[{index}] = {value} is outside (-1, ∞)")]
    AlphaOutOfRange { index: usize, value: f64 },

    #[error("coordinate {index} must be strictly positive and finite, got {value}")]
    BadCoordinate { index: usize, value: f64 },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("time parameter must be strictly positive, got {0}")]
    NonPositiveTime(f64),

    #[error("spectral kernel requested at t = {t}, below the trust floor t_min = {t_min}")]
    SpectralFloor { t: f64, t_min: f64 },

    #[error("quadrature did not stabilize: {panels} panels, last refinement delta {delta:e}")]
    QuadratureStall { panels: usize, delta: f64 },

    #[error("sample must contain at least one point")]
    EmptySample,

    #[error("special function domain: {0}")]
    SpecialDomain(&'static str),

    #[error("special function expansion did not converge: {0}")]
    SpecialConvergence(&'static str),

    #[error("non-finite value encountered in {0}")]
    NonFinite(&'static str),
}

pub type Result<T> = core::result::Result<T, Error>;
