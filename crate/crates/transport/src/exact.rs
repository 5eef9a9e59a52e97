//! Exact discrete-discrete distance through the integer network solver.
//!
//! Weights are encoded as integers (unit supplies for uniform equal-size
//! instances, largest-remainder dyadic units otherwise) and costs are scaled
//! to a fixed integer resolution, so the pivoting is exact arithmetic; the
//! reported cost is then re-accumulated from the floating-point cost matrix
//! over the optimal plan.

use crate::cost::cost_matrix;
use crate::error::{Error, Result};
use crate::measure::{CouplingPlan, DiscreteMeasure, Method, PlanEntry, SolverDiagnostics, W2Result};
use crate::simplex::{scale_weights, solve_transport};

/// Largest supported side for uniform weights with equal sizes, where the
/// solve is an assignment problem with unit supplies.
pub const UNIFORM_SIZE_CAP: usize = 2048;
/// Largest supported side for general weights.
pub const GENERAL_SIZE_CAP: usize = 512;

/// Denominator for general weights: dyadic, so every mass in the returned
/// plan is exact in floating point.
const WEIGHT_UNITS: i64 = 1 << 44;
/// The largest cost entry is mapped to this integer value.
const COST_TARGET: f64 = (1u64 << 40) as f64;

/// Exact squared distance and an optimal coupling between two discrete
/// measures, by primal network simplex on integer supplies and costs.
///
/// Uniform equal-size instances run with unit supplies up to side 2048;
/// anything else is capped at side 512. Over-cap inputs are refused with a
/// pointer to the entropic solver.
pub fn w2_discrete_exact(
    mu: &DiscreteMeasure,
    nu: &DiscreteMeasure,
) -> Result<(W2Result, CouplingPlan)> {
    if mu.dim() != nu.dim() {
        return Err(Error::DimensionMismatch {
            left: mu.dim(),
            right: nu.dim(),
        });
    }
    let n = mu.len();
    let m = nu.len();
    let uniform = n == m && is_uniform(mu) && is_uniform(nu);
    let cap = if uniform { UNIFORM_SIZE_CAP } else { GENERAL_SIZE_CAP };
    if n.max(m) > cap {
        return Err(Error::SizeOverCap {
            size: n.max(m),
            cap,
        });
    }
    let cost = cost_matrix(mu, nu)?;
    let max_cost = cost.iter().cloned().fold(0.0f64, f64::max);
    let scale = if max_cost > 0.0 { COST_TARGET / max_cost } else { 1.0 };
    let int_cost = |i: usize, j: usize| (cost[i * m + j] * scale).round() as i64;
    let max_int = (max_cost * scale).round() as i64;
    let (supplies, demands, total_units) = if uniform {
        (vec![1i64; n], vec![1i64; m], n as i64)
    } else {
        (
            scale_weights(mu.weights(), WEIGHT_UNITS),
            scale_weights(nu.weights(), WEIGHT_UNITS),
            WEIGHT_UNITS,
        )
    };
    let solution = solve_transport(&supplies, &demands, &int_cost, max_int)?;
    let mut entries = Vec::with_capacity(solution.flows.len());
    let mut total_cost = 0.0;
    for &(src, tgt, flow) in &solution.flows {
        let mass = flow as f64 / total_units as f64;
        total_cost += mass * cost[src as usize * m + tgt as usize];
        entries.push(PlanEntry {
            source: src as usize,
            target: tgt as usize,
            mass,
        });
    }
    let result = W2Result::from_squared(
        total_cost,
        Method::ExactDiscrete,
        SolverDiagnostics {
            iterations: solution.pivots,
            converged: true,
            duality_gap: Some(0.0),
            generation_rounds: Some(solution.rounds),
            active_arcs: Some(solution.arcs),
            ..SolverDiagnostics::default()
        },
    );
    Ok((result, CouplingPlan { entries, total_cost }))
}

fn is_uniform(m: &DiscreteMeasure) -> bool {
    let even = 1.0 / m.len() as f64;
    m.weights().iter().all(|&w| (w - even).abs() <= 1e-12 * even)
}
