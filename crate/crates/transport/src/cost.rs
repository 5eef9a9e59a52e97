//! Squared intrinsic-metric cost matrices between discrete measures.

use crate::error::{Error, Result};
use crate::measure::DiscreteMeasure;

/// Row-major matrix with entry (i, j) = ϱ_N(x_i, y_j)²: both atom clouds are
/// flat-transformed and the squared Euclidean distance is taken there. Each
/// entry's summands are squares of differences, so swapping the arguments
/// transposes the matrix bitwise.
pub fn cost_matrix(mu: &DiscreteMeasure, nu: &DiscreteMeasure) -> Result<Vec<f64>> {
    if mu.dim() != nu.dim() {
        return Err(Error::DimensionMismatch {
            left: mu.dim(),
            right: nu.dim(),
        });
    }
    let dim = mu.dim();
    let us = mu.flat_points();
    let vs = nu.flat_points();
    let mut out = Vec::with_capacity(mu.len() * nu.len());
    for u in us.chunks_exact(dim) {
        for v in vs.chunks_exact(dim) {
            out.push(flat_sq_dist(u, v));
        }
    }
    Ok(out)
}

pub(crate) fn flat_sq_dist(u: &[f64], v: &[f64]) -> f64 {
    let mut acc = 0.0;
    for (a, b) in u.iter().zip(v) {
        let d = a - b;
        acc += d * d;
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identical_clouds_have_zero_diagonal() {
        let mu = DiscreteMeasure::uniform(2, vec![1.0, 2.0, 3.0, 0.5]).unwrap();
        let c = cost_matrix(&mu, &mu).unwrap();
        assert_eq!(c[0], 0.0);
        assert_eq!(c[3], 0.0);
    }

    #[test]
    fn one_dimensional_pair_matches_the_metric() {
        let mu = DiscreteMeasure::uniform(1, vec![1.0]).unwrap();
        let nu = DiscreteMeasure::uniform(1, vec![4.0]).unwrap();
        let c = cost_matrix(&mu, &nu).unwrap();
        // ϱ(1, 4)² = (2·1 − 2·2)² = 4.
        assert!((c[0] - 4.0).abs() <= 1e-14);
    }

    #[test]
    fn swapping_arguments_transposes_bitwise() {
        let mu = DiscreteMeasure::uniform(2, vec![0.3, 5.0, 2.2, 1.7, 4.4, 0.9]).unwrap();
        let nu = DiscreteMeasure::uniform(2, vec![1.1, 1.2, 6.5, 0.4]).unwrap();
        let ab = cost_matrix(&mu, &nu).unwrap();
        let ba = cost_matrix(&nu, &mu).unwrap();
        for i in 0..mu.len() {
            for j in 0..nu.len() {
                assert_eq!(
                    ab[i * nu.len() + j].to_bits(),
                    ba[j * mu.len() + i].to_bits()
                );
            }
        }
    }

    #[test]
    fn dimension_mismatch_is_rejected() {
        let mu = DiscreteMeasure::uniform(1, vec![1.0]).unwrap();
        let nu = DiscreteMeasure::uniform(2, vec![1.0, 2.0]).unwrap();
        assert!(matches!(
            cost_matrix(&mu, &nu),
            Err(Error::DimensionMismatch { .. })
        ));
    }
}
