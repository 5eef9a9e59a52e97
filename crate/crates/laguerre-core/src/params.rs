//! Parameter block, state-space points, and spectral multi-indices.

use crate::error::{Error, Result};
use crate::special::gamma::ln_gamma;

/// Parameters of the Laguerre model: one exponent α_i > -1 per coordinate.
#[derive(Clone, Debug, PartialEq)]
pub struct ModelParams {
    alpha: Vec<f64>,
}

impl ModelParams {
    pub fn new(alpha: Vec<f64>) -> Result<Self> {
        if alpha.is_empty() {
            return Err(Error::EmptyParameterList);
        }
        for (index, &value) in alpha.iter().enumerate() {
            if !value.is_finite() || value <= -1.0 {
                return Err(Error::AlphaOutOfRange { index, value });
            }
        }
        Ok(Self { alpha })
    }

    pub fn one_dim(alpha: f64) -> Result<Self> {
        Self::new(vec![alpha])
    }

    pub fn dim(&self) -> usize {
        self.alpha.len()
    }

    pub fn alpha(&self) -> &[f64] {
        &self.alpha
    }

    /// α_⋆ = min_i α_i, the exponent that controls the small-ball behaviour
    /// of μ^α near the corner of the orthant.
    pub fn alpha_star(&self) -> f64 {
        self.alpha.iter().copied().fold(f64::INFINITY, f64::min)
    }

    /// Whether every exponent satisfies α_i ≥ -1/2, the range in which the
    /// intrinsic metric comparisons hold.
    pub fn theorem_regime_ok(&self) -> bool {
        self.alpha_star() >= -0.5
    }

    /// ln ∏_i Γ(1 + α_i), the log normalization constant of μ^α.
    pub fn ln_norm(&self) -> f64 {
        self.alpha.iter().map(|&a| ln_gamma(1.0 + a)).sum()
    }

    /// Gamma shape parameters (α_i + 1) of the product factors.
    pub fn shapes(&self) -> Vec<f64> {
        self.alpha.iter().map(|&a| a + 1.0).collect()
    }
}

/// A point of the open orthant (0, ∞)^N.
#[derive(Clone, Debug, PartialEq)]
pub struct Point {
    coords: Vec<f64>,
}

impl Point {
    pub fn new(coords: Vec<f64>) -> Result<Self> {
        if coords.is_empty() {
            return Err(Error::EmptyParameterList);
        }
        for (index, &value) in coords.iter().enumerate() {
            if !value.is_finite() || value <= 0.0 {
                return Err(Error::BadCoordinate { index, value });
            }
        }
        Ok(Self { coords })
    }

    pub fn one_dim(x: f64) -> Result<Self> {
        Self::new(vec![x])
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }
}

/// Multi-index n ∈ ℕ^N of the Laguerre eigenbasis; the eigenfunction
/// l_n = ∏_i l_{n_i}^{α_i} has eigenvalue -|n| with |n| = Σ_i n_i.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MultiIndex {
    entries: Vec<u32>,
}

impl MultiIndex {
    pub fn new(entries: Vec<u32>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::EmptyParameterList);
        }
        Ok(Self { entries })
    }

    pub fn one_dim(n: u32) -> Self {
        Self { entries: vec![n] }
    }

    pub fn entries(&self) -> &[u32] {
        &self.entries
    }

    pub fn dim(&self) -> usize {
        self.entries.len()
    }

    /// Total degree |n|.
    pub fn order(&self) -> u64 {
        self.entries.iter().map(|&k| k as u64).sum()
    }
}

/// ln of the μ^α density at x with respect to Lebesgue measure.
pub fn ln_density_mu_alpha(params: &ModelParams, x: &Point) -> Result<f64> {
    if params.dim() != x.dim() {
        return Err(Error::DimensionMismatch {
            expected: params.dim(),
            got: x.dim(),
        });
    }
    let mut acc = -params.ln_norm();
    for (&a, &xi) in params.alpha().iter().zip(x.coords()) {
        acc += a * xi.ln() - xi;
    }
    Ok(acc)
}

/// Density of μ^α at x with respect to Lebesgue measure on the orthant.
///
/// ```
/// use laguerre_core::{density_mu_alpha, ModelParams, Point};
/// let params = ModelParams::one_dim(0.0).unwrap();
/// let x = Point::one_dim(1.0).unwrap();
/// // α = 0 is the unit exponential: density e^{-1} at x = 1.
/// assert!((density_mu_alpha(&params, &x).unwrap() - (-1.0_f64).exp()).abs() < 1e-15);
/// ```
pub fn density_mu_alpha(params: &ModelParams, x: &Point) -> Result<f64> {
    ln_density_mu_alpha(params, x).map(f64::exp)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validates_alpha_range() {
        assert!(ModelParams::new(vec![-0.5, 0.0, 2.0]).is_ok());
        assert!(ModelParams::new(vec![-1.0]).is_err());
        assert!(ModelParams::new(vec![0.0, f64::NAN]).is_err());
        assert!(ModelParams::new(vec![]).is_err());
    }

    #[test]
    fn alpha_star_is_the_minimum() {
        let p = ModelParams::new(vec![0.3, -0.5, 1.0]).unwrap();
        assert_eq!(p.alpha_star(), -0.5);
        assert!(p.theorem_regime_ok());
        let q = ModelParams::new(vec![0.3, -0.75]).unwrap();
        assert!(!q.theorem_regime_ok());
    }

    #[test]
    fn point_rejects_boundary_and_nan() {
        assert!(Point::new(vec![1.0, 2.0]).is_ok());
        assert!(Point::new(vec![0.0]).is_err());
        assert!(Point::new(vec![-1.0]).is_err());
        assert!(Point::new(vec![f64::INFINITY]).is_err());
    }

    #[test]
    fn multi_index_order() {
        let n = MultiIndex::new(vec![2, 0, 5]).unwrap();
        assert_eq!(n.order(), 7);
    }

    #[test]
    fn density_at_square_root_weight() {
        // α = -1/2, x = 1/4: density = x^{-1/2} e^{-x} / Γ(1/2)
        //                            = 2 e^{-1/4} / √π.
        let params = ModelParams::one_dim(-0.5).unwrap();
        let x = Point::one_dim(0.25).unwrap();
        let want = 2.0 * (-0.25_f64).exp() / core::f64::consts::PI.sqrt();
        let got = density_mu_alpha(&params, &x).unwrap();
        assert!((got - want).abs() < 1e-14);
        // Cross-check against an independent gamma-density evaluation.
        let reference = {
            use statrs::distribution::{Continuous, Gamma};
            Gamma::new(0.5, 1.0).unwrap().pdf(0.25)
        };
        assert!((got - reference).abs() < 1e-13);
    }

    #[test]
    fn density_factorizes_over_coordinates() {
        let params = ModelParams::new(vec![0.0, 1.3]).unwrap();
        let x = Point::new(vec![0.7, 2.1]).unwrap();
        let p0 = density_mu_alpha(&ModelParams::one_dim(0.0).unwrap(), &Point::one_dim(0.7).unwrap())
            .unwrap();
        let p1 = density_mu_alpha(&ModelParams::one_dim(1.3).unwrap(), &Point::one_dim(2.1).unwrap())
            .unwrap();
        let joint = density_mu_alpha(&params, &x).unwrap();
        assert!((joint - p0 * p1).abs() < 1e-15 * joint.abs());
    }

    #[test]
    fn dimension_mismatch_is_reported() {
        let params = ModelParams::new(vec![0.0, 0.0]).unwrap();
        let x = Point::one_dim(1.0).unwrap();
        assert!(density_mu_alpha(&params, &x).is_err());
    }
}
