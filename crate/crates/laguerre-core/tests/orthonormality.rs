//! Orthonormality of the Laguerre eigenbasis under μ^α and the eigenfunction
//! identity for the generator, in one dimension and for product multi-indices
//! on the orthant.

use laguerre_core::operator::generator_apply;
use laguerre_core::quad::integrate_mu;
use laguerre_core::special::laguerre::{laguerre_orthonormal, laguerre_orthonormal_sequence};
use laguerre_core::{ModelParams, NumericPolicy, Point};

#[test]
fn one_dimensional_gram_matrix_is_the_identity() {
    let policy = NumericPolicy::default();
    for &alpha in &[-0.5, 0.0, 1.3] {
        for n in 0..=3u32 {
            for m in n..=3u32 {
                let inner = integrate_mu(alpha, &policy, |x| {
                    laguerre_orthonormal(n, alpha, x) * laguerre_orthonormal(m, alpha, x)
                })
                .unwrap();
                let want = if n == m { 1.0 } else { 0.0 };
                assert!(
                    (inner - want).abs() <= 1e-6,
                    "alpha={alpha} <l_{n}, l_{m}> = {inner}"
                );
            }
        }
    }
}

/// Multi-indices of total degree at most `max` in two coordinates.
fn two_dim_indices(max: u32) -> Vec<(u32, u32)> {
    let mut out = Vec::new();
    for total in 0..=max {
        for first in 0..=total {
            out.push((first, total - first));
        }
    }
    out
}

#[test]
fn product_basis_gram_matrix_is_the_identity() {
    // The basis factorizes over coordinates, so each Gram entry is a product
    // of one-dimensional inner products; every factor is computed by
    // quadrature rather than assumed.
    let policy = NumericPolicy::default();
    let alpha = [-0.5, 1.0];
    let indices = two_dim_indices(3);
    let mut inner_1d = vec![[[0.0f64; 4]; 4]; 2];
    for (coord, &a) in alpha.iter().enumerate() {
        for n in 0..=3u32 {
            for m in 0..=3u32 {
                inner_1d[coord][n as usize][m as usize] = integrate_mu(a, &policy, |x| {
                    laguerre_orthonormal(n, a, x) * laguerre_orthonormal(m, a, x)
                })
                .unwrap();
            }
        }
    }
    for &(n1, n2) in &indices {
        for &(m1, m2) in &indices {
            let entry = inner_1d[0][n1 as usize][m1 as usize] * inner_1d[1][n2 as usize][m2 as usize];
            let want = if (n1, n2) == (m1, m2) { 1.0 } else { 0.0 };
            assert!(
                (entry - want).abs() <= 1e-6,
                "<l_({n1},{n2}), l_({m1},{m2})> = {entry}"
            );
        }
    }
}

#[test]
fn iterated_quadrature_agrees_with_the_product_identity() {
    // One genuinely two-dimensional entry, evaluated as an iterated integral,
    // to validate that the product reduction above is not circular.
    let policy = NumericPolicy::default();
    let (a0, a1) = (0.0, -0.5);
    let entry = integrate_mu(a0, &policy, |x0| {
        let l2 = laguerre_orthonormal(2, a0, x0);
        l2 * integrate_mu(a1, &policy, |x1| {
            laguerre_orthonormal(1, a1, x1) * laguerre_orthonormal(1, a1, x1)
        })
        .unwrap()
            * laguerre_orthonormal(2, a0, x0)
    })
    .unwrap();
    assert!((entry - 1.0).abs() <= 1e-6, "iterated <l_(2,1), l_(2,1)> = {entry}");
    let off = integrate_mu(a0, &policy, |x0| {
        let lx = laguerre_orthonormal(2, a0, x0) * laguerre_orthonormal(1, a0, x0);
        lx * integrate_mu(a1, &policy, |x1| {
            laguerre_orthonormal(1, a1, x1) * laguerre_orthonormal(2, a1, x1)
        })
        .unwrap()
    })
    .unwrap();
    assert!(off.abs() <= 1e-6, "iterated off-diagonal entry = {off}");
}

#[test]
fn product_eigenfunctions_satisfy_the_generator_identity() {
    // ℒ^α l_n = -|n| l_n for multi-indices of total degree up to 3, checked
    // by central differences at interior grid points.
    let params = ModelParams::new(vec![-0.5, 1.0]).unwrap();
    let alpha = params.alpha().to_vec();
    for &(n1, n2) in &two_dim_indices(3) {
        let order = (n1 + n2) as f64;
        for &x1 in &[0.4, 1.1, 2.7] {
            for &x2 in &[0.6, 1.9, 4.2] {
                let point = Point::new(vec![x1, x2]).unwrap();
                let f = |v: &[f64]| {
                    laguerre_orthonormal(n1, alpha[0], v[0])
                        * laguerre_orthonormal(n2, alpha[1], v[1])
                };
                let lhs = generator_apply(&params, f, &point, None).unwrap();
                let want = -order * f(point.coords());
                assert!(
                    (lhs - want).abs() <= 1e-5 * want.abs().max(1.0),
                    "n=({n1},{n2}) x=({x1},{x2}): {lhs} vs {want}"
                );
            }
        }
    }
}

#[test]
fn orthonormal_sequence_matches_individual_evaluations() {
    for &alpha in &[-0.5, 0.0, 1.3] {
        for &x in &[0.2, 1.0, 6.5] {
            let seq: Vec<f64> = laguerre_orthonormal_sequence(5, alpha, x);
            for (k, &v) in seq.iter().enumerate() {
                let single = laguerre_orthonormal(k as u32, alpha, x);
                assert_eq!(v.to_bits(), single.to_bits(), "alpha={alpha} k={k} x={x}");
            }
        }
    }
}
