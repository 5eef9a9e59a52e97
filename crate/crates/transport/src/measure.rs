//! Discrete measures on the orthant, coupling plans, and the result record
//! shared by every distance estimator.

use crate::error::{Error, Result};
use laguerre_core::metric::flat_transform;
use laguerre_core::SampleSet;

/// Finitely supported probability measure with atoms in the open orthant.
#[derive(Clone, Debug)]
pub struct DiscreteMeasure {
    dim: usize,
    points: Vec<f64>,
    weights: Vec<f64>,
}

impl DiscreteMeasure {
    /// Measure from row-major atom coordinates and explicit weights.
    pub fn new(dim: usize, points: Vec<f64>, weights: Vec<f64>) -> Result<Self> {
        if dim == 0 || weights.is_empty() || points.len() != dim * weights.len() {
            return Err(Error::EmptyMeasure);
        }
        for (index, row) in points.chunks_exact(dim).enumerate() {
            if row.iter().any(|&c| !c.is_finite() || c <= 0.0) {
                return Err(Error::BadPoint { index });
            }
        }
        // Compensated summation: the invariant is on the weights themselves,
        // so the check must not charge them for naive-accumulation error,
        // which alone exceeds the tolerance around a million atoms.
        let mut total = 0.0;
        let mut carry = 0.0;
        for (index, &w) in weights.iter().enumerate() {
            if !w.is_finite() || w < 0.0 {
                return Err(Error::BadWeight { index, value: w });
            }
            let y = w - carry;
            let t = total + y;
            carry = (t - total) - y;
            total = t;
        }
        if (total - 1.0).abs() > 1e-12 {
            return Err(Error::WeightSum(total));
        }
        Ok(Self { dim, points, weights })
    }

    /// Uniform measure on the given atoms.
    pub fn uniform(dim: usize, points: Vec<f64>) -> Result<Self> {
        if dim == 0 || points.is_empty() || !points.len().is_multiple_of(dim) {
            return Err(Error::EmptyMeasure);
        }
        let m = points.len() / dim;
        Self::new(dim, points, vec![1.0 / m as f64; m])
    }

    /// Empirical measure of a sample set: uniform weights on the draws.
    pub fn from_sample_set(samples: &SampleSet) -> Result<Self> {
        Self::uniform(samples.dim(), samples.data().to_vec())
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn point(&self, i: usize) -> &[f64] {
        &self.points[i * self.dim..(i + 1) * self.dim]
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// All atoms mapped by the flat transform u_i = 2√x_i, row-major.
    pub fn flat_points(&self) -> Vec<f64> {
        let mut out = Vec::with_capacity(self.points.len());
        for row in self.points.chunks_exact(self.dim) {
            out.extend(flat_transform(row).expect("atoms validated positive"));
        }
        out
    }
}

/// One matched pair of a transport plan.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PlanEntry {
    pub source: usize,
    pub target: usize,
    pub mass: f64,
}

/// Transport plan between two discrete measures.
#[derive(Clone, Debug)]
pub struct CouplingPlan {
    pub entries: Vec<PlanEntry>,
    pub total_cost: f64,
}

impl CouplingPlan {
    /// Largest deviation of the plan's marginals from the two weight vectors.
    pub fn marginal_residual(&self, mu: &DiscreteMeasure, nu: &DiscreteMeasure) -> f64 {
        let mut row = vec![0.0; mu.len()];
        let mut col = vec![0.0; nu.len()];
        for e in &self.entries {
            row[e.source] += e.mass;
            col[e.target] += e.mass;
        }
        let r = row
            .iter()
            .zip(mu.weights())
            .map(|(got, want)| (got - want).abs())
            .fold(0.0, f64::max);
        let c = col
            .iter()
            .zip(nu.weights())
            .map(|(got, want)| (got - want).abs())
            .fold(0.0, f64::max);
        r.max(c)
    }
}

/// How a distance value was produced.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Method {
    Quantile1d,
    ExactDiscrete,
    Sinkhorn,
    ProxyNd,
}

impl std::fmt::Display for Method {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let name = match self {
            Method::Quantile1d => "quantile-1d",
            Method::ExactDiscrete => "exact-discrete",
            Method::Sinkhorn => "sinkhorn",
            Method::ProxyNd => "proxy-nd",
        };
        f.write_str(name)
    }
}

/// Solver bookkeeping carried alongside a distance value.
#[derive(Clone, Debug, Default)]
pub struct SolverDiagnostics {
    pub iterations: u64,
    pub converged: bool,
    pub marginal_violation: Option<f64>,
    pub duality_gap: Option<f64>,
    pub entropic_cost: Option<f64>,
    pub generation_rounds: Option<u32>,
    pub active_arcs: Option<usize>,
}

/// A squared Kantorovich distance and its square root, with provenance.
#[derive(Clone, Debug)]
pub struct W2Result {
    pub value: f64,
    pub squared: f64,
    pub method: Method,
    pub diagnostics: SolverDiagnostics,
}

impl W2Result {
    pub fn from_squared(squared: f64, method: Method, diagnostics: SolverDiagnostics) -> Self {
        let clamped = squared.max(0.0);
        Self {
            value: clamped.sqrt(),
            squared,
            method,
            diagnostics,
        }
    }
}
