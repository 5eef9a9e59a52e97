//! Optimal-transport distances under the intrinsic metric of the Laguerre
//! model.
//!
//! Everything here measures squared Kantorovich distance of order 2 with the
//! ground cost ϱ_N(x, y)² = Σ_i 4(√x_i − √y_i)², the intrinsic metric of the
//! model generator. The coordinate map u_i = 2√x_i turns that cost into plain
//! squared Euclidean distance, so all solvers work in the flat coordinates.
//!
//! Four routes to a distance:
//!
//! - [`w2_exact_1d_model`]: sample versus the model marginal itself in one
//!   dimension, through the quantile coupling — exact up to quadrature.
//! - [`w2_discrete_exact`]: two discrete measures, by an integer network
//!   simplex — exact, with a certified optimal plan.
//! - [`w2_sinkhorn`]: two discrete measures, entropically regularized — the
//!   debiased divergence, for instances past the exact caps.
//! - [`w2_model_proxy_nd`]: sample versus the model in any dimension, by the
//!   distance to a large independent reference sample — upward-biased proxy
//!   with a triangle-inequality bias bound.

#![forbid(unsafe_code)]

pub mod cost;
pub mod error;
pub mod exact;
pub mod measure;
pub mod onedim;
pub mod proxy;
pub mod quantile;
mod simplex;
pub mod sinkhorn;

pub use cost::cost_matrix;
pub use error::{Error, Result};
pub use exact::{w2_discrete_exact, GENERAL_SIZE_CAP, UNIFORM_SIZE_CAP};
pub use measure::{CouplingPlan, DiscreteMeasure, Method, PlanEntry, SolverDiagnostics, W2Result};
pub use onedim::{w2_discrete_1d, w2_exact_1d_model};
pub use proxy::{w2_model_proxy_nd, ProxySolver};
pub use quantile::gamma_quantile;
pub use sinkhorn::w2_sinkhorn;
