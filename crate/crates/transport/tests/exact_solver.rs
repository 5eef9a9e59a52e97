//! The exact discrete solver against independent references: brute-force
//! permutation enumeration on every small uniform instance, the monotone
//! matching in one dimension, and coupling validity on weighted instances.

use itertools::Itertools;
use laguerre_core::sampling::seeds;
use rand::Rng;
use transport::{cost_matrix, w2_discrete_exact, DiscreteMeasure};

fn random_cloud<R: Rng>(rng: &mut R, dim: usize, count: usize) -> Vec<f64> {
    (0..dim * count).map(|_| rng.random_range(0.05..5.0)).collect()
}

#[test]
fn uniform_instances_match_brute_force_enumeration_exactly() {
    let mut rng = seeds::stream(2024_0501);
    for _ in 0..500 {
        let n = rng.random_range(1..=8usize);
        let dim = rng.random_range(1..=3usize);
        let mu = DiscreteMeasure::uniform(dim, random_cloud(&mut rng, dim, n)).unwrap();
        let nu = DiscreteMeasure::uniform(dim, random_cloud(&mut rng, dim, n)).unwrap();
        let cost = cost_matrix(&mu, &nu).unwrap();
        let mass = 1.0 / n as f64;
        // The enumeration accumulates mass-weighted costs in source order,
        // the same operation sequence the solver uses to report its cost, so
        // the optimal values must agree to the last bit.
        let best = (0..n)
            .permutations(n)
            .map(|sigma| {
                let mut acc = 0.0;
                for (i, &j) in sigma.iter().enumerate() {
                    acc += mass * cost[i * n + j];
                }
                acc
            })
            .fold(f64::INFINITY, f64::min);
        let (result, plan) = w2_discrete_exact(&mu, &nu).unwrap();
        assert_eq!(
            result.squared, best,
            "solver disagrees with enumeration on n={n} dim={dim}"
        );
        assert!(plan.marginal_residual(&mu, &nu) <= 1e-9);
        assert_eq!(plan.entries.len(), n);
    }
}

#[test]
fn one_dimensional_optimum_is_the_sorted_matching() {
    let mut rng = seeds::stream(77);
    for trial in 0..20 {
        let n = rng.random_range(2..=40usize);
        let xs = random_cloud(&mut rng, 1, n);
        let ys = random_cloud(&mut rng, 1, n);
        let mu = DiscreteMeasure::uniform(1, xs.clone()).unwrap();
        let nu = DiscreteMeasure::uniform(1, ys.clone()).unwrap();
        let (result, _) = w2_discrete_exact(&mu, &nu).unwrap();
        let mut sx = xs.clone();
        let mut sy = ys.clone();
        sx.sort_by(|a, b| a.partial_cmp(b).unwrap());
        sy.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let sorted_cost: f64 = sx
            .iter()
            .zip(&sy)
            .map(|(&x, &y)| {
                let d = 2.0 * x.sqrt() - 2.0 * y.sqrt();
                d * d / n as f64
            })
            .sum();
        assert!(
            (result.squared - sorted_cost).abs() <= 1e-12,
            "trial {trial}: solver {} vs sorted matching {sorted_cost}",
            result.squared
        );
        // Shuffling the input order must not change the value.
        let mut shuffled: Vec<usize> = (0..n).collect();
        for k in (1..n).rev() {
            let swap = rng.random_range(0..=k);
            shuffled.swap(k, swap);
        }
        let xs_shuffled: Vec<f64> = shuffled.iter().map(|&i| xs[i]).collect();
        let mu_shuffled = DiscreteMeasure::uniform(1, xs_shuffled).unwrap();
        let (again, _) = w2_discrete_exact(&mu_shuffled, &nu).unwrap();
        assert!((again.squared - result.squared).abs() <= 1e-12);
    }
}

#[test]
fn weighted_plans_are_valid_couplings() {
    let mut rng = seeds::stream(4096);
    for _ in 0..25 {
        let n = rng.random_range(1..=30usize);
        let m = rng.random_range(1..=30usize);
        let dim = rng.random_range(1..=2usize);
        let raw_a: Vec<f64> = (0..n).map(|_| rng.random_range(0.1..1.0)).collect();
        let raw_b: Vec<f64> = (0..m).map(|_| rng.random_range(0.1..1.0)).collect();
        let sum_a: f64 = raw_a.iter().sum();
        let sum_b: f64 = raw_b.iter().sum();
        let mu = DiscreteMeasure::new(
            dim,
            random_cloud(&mut rng, dim, n),
            raw_a.iter().map(|w| w / sum_a).collect(),
        )
        .unwrap();
        let nu = DiscreteMeasure::new(
            dim,
            random_cloud(&mut rng, dim, m),
            raw_b.iter().map(|w| w / sum_b).collect(),
        )
        .unwrap();
        let (result, plan) = w2_discrete_exact(&mu, &nu).unwrap();
        assert!(result.squared >= 0.0);
        assert!(
            plan.marginal_residual(&mu, &nu) <= 1e-9,
            "residual {}",
            plan.marginal_residual(&mu, &nu)
        );
        assert!(plan.entries.iter().all(|e| e.mass >= 0.0));
    }
}
