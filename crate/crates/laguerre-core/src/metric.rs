//! The intrinsic metric of the Laguerre operator.
//!
//! The carré du champ Γ^α(f) = Σ_i x_i (∂_i f)² induces the distance
//! ϱ_N(x, y) = |u(x) - u(y)| where u_i = 2√x_i flattens each coordinate.
//! In one dimension ϱ(x, y) = 2|√x - √y|.

use crate::error::{Error, Result};
use crate::real::Real;

/// The flat coordinate u_i = 2√x_i, defined on the closed orthant.
pub fn flat_transform(x: &[f64]) -> Result<Vec<f64>> {
    x.iter()
        .enumerate()
        .map(|(index, &value)| {
            if !value.is_finite() || value < 0.0 {
                Err(Error::BadCoordinate { index, value })
            } else {
                Ok(2.0 * value.sqrt())
            }
        })
        .collect()
}

/// One-dimensional intrinsic distance ϱ(x, y) = 2|√x - √y|, x, y ≥ 0.
pub fn rho_1d<T: Real>(x: T, y: T) -> T {
    T::of(2.0) * (x.sqrt() - y.sqrt()).abs()
}

/// Squared one-dimensional distance, the quantity Monte Carlo loops sum.
pub fn rho_1d_sq<T: Real>(x: T, y: T) -> T {
    let d = x.sqrt() - y.sqrt();
    T::of(4.0) * d * d
}

/// Intrinsic distance on the orthant: the Euclidean norm of the flat
/// coordinates' difference.
pub fn rho_n(x: &[f64], y: &[f64]) -> Result<f64> {
    rho_n_sq(x, y).map(f64::sqrt)
}

/// Squared intrinsic distance ϱ_N(x, y)² = Σ_i 4 (√x_i - √y_i)².
pub fn rho_n_sq(x: &[f64], y: &[f64]) -> Result<f64> {
    if x.len() != y.len() {
        return Err(Error::DimensionMismatch {
            expected: x.len(),
            got: y.len(),
        });
    }
    let mut acc = 0.0;
    for (index, (&a, &b)) in x.iter().zip(y).enumerate() {
        if !a.is_finite() || a < 0.0 {
            return Err(Error::BadCoordinate { index, value: a });
        }
        if !b.is_finite() || b < 0.0 {
            return Err(Error::BadCoordinate { index, value: b });
        }
        acc += rho_1d_sq(a, b);
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;
    use rand::SeedableRng;

    #[test]
    fn flat_transform_doubles_square_roots() {
        let u = flat_transform(&[0.0, 1.0, 4.0]).unwrap();
        assert_eq!(u, vec![0.0, 2.0, 4.0]);
        assert!(flat_transform(&[-0.1]).is_err());
    }

    #[test]
    fn distance_is_euclidean_in_flat_coordinates() {
        let x = [0.9, 2.0, 0.1];
        let y = [1.4, 0.3, 0.1];
        let u = flat_transform(&x).unwrap();
        let v = flat_transform(&y).unwrap();
        let direct = rho_n(&x, &y).unwrap();
        let flat: f64 = u
            .iter()
            .zip(&v)
            .map(|(a, b)| (a - b) * (a - b))
            .sum::<f64>()
            .sqrt();
        assert!((direct - flat).abs() < 1e-15);
    }

    #[test]
    fn metric_axioms_on_random_triples() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(0x4d45_5452);
        for _ in 0..2000 {
            let dim = rng.random_range(1..4usize);
            let draw = |rng: &mut rand_chacha::ChaCha8Rng| {
                (0..dim).map(|_| rng.random::<f64>() * 10.0).collect::<Vec<_>>()
            };
            let x = draw(&mut rng);
            let y = draw(&mut rng);
            let z = draw(&mut rng);
            let dxy = rho_n(&x, &y).unwrap();
            let dyx = rho_n(&y, &x).unwrap();
            let dxz = rho_n(&x, &z).unwrap();
            let dzy = rho_n(&z, &y).unwrap();
            assert_eq!(dxy, dyx);
            assert!(dxy >= 0.0);
            assert!(dxy <= dxz + dzy + 1e-12);
            assert!(rho_n(&x, &x).unwrap() == 0.0);
        }
    }

    #[test]
    fn one_dimensional_distance_from_origin() {
        // ϱ(0, x) = 2√x.
        assert!((rho_1d(0.0_f64, 9.0) - 6.0).abs() < 1e-15);
        assert!((rho_1d_sq(0.0_f64, 9.0) - 36.0).abs() < 1e-12);
    }

    #[test]
    fn works_in_single_precision() {
        let d = rho_1d(1.0_f32, 4.0_f32);
        assert!((d - 2.0).abs() < 1e-6);
    }
}
