use thiserror::Error;

/// Errors produced by the truncation / smoothing pipeline.
#[derive(Debug, Error)]
pub enum Error {
    #[error("ball radius must be positive and finite, got {0}")]
    BadRadius(f64),

    #[error("radius constant must be positive and finite, got {0}")]
    BadConstant(f64),

    #[error("sample count {0} is too small to define a log-scaled radius")]
    SampleCountTooSmall(usize),

    #[error("{name} must be {requirement}, got {value}")]
    BadParameter {
        name: &'static str,
        requirement: &'static str,
        value: f64,
    },

    #[error(
        "ball mass {mass:e} is below the rejection-sampling floor 1e-3; \
         the radius is too small for resampling to terminate"
    )]
    AcceptanceTooSmall { mass: f64 },

    #[error("rejection sampling exceeded {0} attempts without an accepted point")]
    RejectionStalled(u64),

    #[error(
        "base point {point} has coordinate {value} at or beyond the ball cutoff {cutoff}"
    )]
    PointOutsideBall {
        point: usize,
        value: f64,
        cutoff: f64,
    },

    #[error("operation is one-dimensional only, got dimension {0}")]
    NotOneDimensional(usize),

    #[error("series truncation did not converge: {0}")]
    SeriesConvergence(&'static str),

    #[error(transparent)]
    Core(#[from] laguerre_core::error::Error),

    #[error(transparent)]
    Transport(#[from] transport::Error),
}

pub type Result<T> = core::result::Result<T, Error>;
