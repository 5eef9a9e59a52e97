use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("measure has no atoms")]
    EmptyMeasure,
    #[error("weights sum to {0}, expected 1 within 1e-12")]
    WeightSum(f64),
    #[error("weight {index} is {value}, expected nonnegative")]
    BadWeight { index: usize, value: f64 },
    #[error("point {index} has a nonpositive or nonfinite coordinate")]
    BadPoint { index: usize },
    #[error("dimension mismatch: left has {left}, right has {right}")]
    DimensionMismatch { left: usize, right: usize },
    #[error("support size {size} exceeds the {cap} cap for the exact solver; use w2_sinkhorn")]
    SizeOverCap { size: usize, cap: usize },
    #[error("probability {0} outside (0, 1)")]
    BadProbability(f64),
    #[error("shape {0} must be positive and finite")]
    BadShape(f64),
    #[error("epsilon {0} must be positive and finite")]
    BadEpsilon(f64),
    #[error("quantile iteration failed to bracket or converge")]
    QuantileConvergence,
    #[error("reference factor {0} is below the minimum of 4")]
    RefFactorTooSmall(usize),
    #[error("operation requires one-dimensional data, got dimension {0}")]
    NotOneDimensional(usize),
    #[error("transport solver stalled: {0}")]
    SolverStall(&'static str),
    #[error(transparent)]
    Core(#[from] laguerre_core::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
