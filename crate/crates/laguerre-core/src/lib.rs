#![forbid(unsafe_code)]
//! Numerical core for the Laguerre model on the positive orthant.
//!
//! The model is the product probability measure
//!
//! ```text
//! dμ^α(x) = ∏_i x_i^{α_i} e^{-x_i} / Γ(1 + α_i) dx_i,   α_i > -1,
//! ```
//!
//! together with the Laguerre diffusion generator
//! `ℒ^α f = Σ_i [ x_i ∂²_i f + (α_i + 1 - x_i) ∂_i f ]`, its heat semigroup,
//! and the intrinsic metric `ϱ_N(x, y)² = Σ_i 4 (√x_i - √y_i)²` induced by the
//! carré du champ `Γ^α(f) = Σ_i x_i (∂_i f)²`.
//!
//! The crate supplies what a simulation laboratory needs from this model:
//! exact samplers for μ^α, the heat kernel in closed (Bessel) and spectral
//! (Laguerre eigenbasis) form, quadrature against μ^α, and finite-difference
//! evaluation of the generator and carré du champ.
//!
//! The special-function and kernel layers are generic over the scalar type
//! through the [`Real`] trait; the laboratory types instantiate everything at
//! [`Scalar`].

pub mod error;
pub mod kernel;
pub mod metric;
pub mod operator;
pub mod params;
pub mod policy;
pub mod quad;
pub mod real;
pub mod sampling;
pub mod special;
pub mod stats;

pub use error::{Error, Result};
pub use kernel::{phi_comparison, KernelEvaluator};
pub use params::{density_mu_alpha, ln_density_mu_alpha, ModelParams, MultiIndex, Point};
pub use policy::NumericPolicy;
pub use real::Real;
pub use sampling::{sample_mu_alpha, SampleSet};

/// Concrete scalar of the laboratory types built on top of this crate.
pub type Scalar = f64;
