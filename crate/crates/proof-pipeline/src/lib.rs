//! Constructive steps of the sampling-rate analysis for the Laguerre model,
//! and numerical verification of the inequalities each step relies on.
//!
//! The pipeline mirrors the three-stage decomposition of the distance
//! between an empirical measure and the model measure:
//!
//! 1. **Truncation** ([`truncation`]) — points outside a product ball are
//!    replaced by draws conditioned on the ball; the exact ball mass, the
//!    tail second moment that prices the step, and a rare-event Monte Carlo
//!    estimator for its transport cost live here.
//! 2. **Smoothing** ([`transition`], [`smoothed`]) — each point is replaced
//!    by its exact time-t transition law (a Poisson-mixed gamma draw),
//!    giving the smoothed empirical measure and its closed-form density.
//! 3. **Diagnostics** ([`diag`]) — the variance drop, ball-bias, gradient
//!    contraction, and on-diagonal kernel inequalities are evaluated by
//!    quadrature and reported as (value, bound, tolerance, pass) entries.

#![forbid(unsafe_code)]

pub mod diag;
pub mod error;
pub mod smoothed;
pub mod transition;
pub mod truncation;

pub use diag::{
    diag_ball_bias, diag_gradient_contraction, diag_kernel_diagonal, diag_variance_drop,
    semigroup_apply, smoothing_variance_drop, BoundKind, DiagnosticEntry, DiagnosticsReport,
    DIAGONAL_RATIO_BAND,
};
pub use error::{Error, Result};
pub use smoothed::SmoothedEmpirical;
pub use transition::{
    smoothing_coupling_cost, transition_density_series, transition_mixture_cdf,
    transition_sample, transition_sample_coords,
};
pub use truncation::{
    mu_ball_mass, tail_second_moment, truncate_samples, truncation_cost_mc, TruncationConfig,
    DEFAULT_RADIUS_CONSTANT,
};
