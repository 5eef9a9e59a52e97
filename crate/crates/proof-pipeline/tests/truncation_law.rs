//! Distributional checks of ball truncation and the decay of its transport
//! cost with the sample size.

use laguerre_core::params::ModelParams;
use laguerre_core::sampling::{gamma_draw, sample_mu_alpha, seeds};
use laguerre_core::stats::{ks_critical_1pct, ks_statistic, ks_two_sample, ks_two_sample_critical_1pct};
use proof_pipeline::{truncate_samples, truncation_cost_mc, TruncationConfig};
use transport::measure::DiscreteMeasure;
use transport::onedim::w2_discrete_1d;

#[test]
fn truncated_law_matches_the_restricted_distribution() {
    // Unit-exponential coordinate restricted to {x < 1}: the CDF is
    // (1 - e^{-x})/(1 - e^{-1}), an oracle independent of the library's
    // incomplete-gamma machinery.
    let params = ModelParams::one_dim(0.0).unwrap();
    let n = 100_000;
    let samples = sample_mu_alpha(&params, n, 20_240_601).unwrap();
    let cfg = TruncationConfig::from_radius(2.0).unwrap();
    let truncated = truncate_samples(&samples, &params, &cfg, 7001).unwrap();
    let sorted = truncated.coord_sorted(0);
    let mass = -(-1.0f64).exp_m1();
    let stat = ks_statistic(&sorted, |x| {
        if x >= 1.0 {
            1.0
        } else {
            -(-x).exp_m1() / mass
        }
    });
    assert!(
        stat < ks_critical_1pct(n),
        "KS {stat} exceeds the 1% critical value"
    );
}

#[test]
fn truncated_law_matches_direct_rejection_draws() {
    // The keep-or-replace construction must agree in law with plain
    // rejection sampling of the restricted measure.
    let params = ModelParams::one_dim(0.0).unwrap();
    let n = 100_000;
    let samples = sample_mu_alpha(&params, n, 555).unwrap();
    let cfg = TruncationConfig::from_radius(2.0).unwrap();
    let truncated = truncate_samples(&samples, &params, &cfg, 556).unwrap();
    let a = truncated.coord_sorted(0);

    let mut rng = seeds::stream(557);
    let mut b = Vec::with_capacity(n);
    while b.len() < n {
        let x = gamma_draw(&mut rng, 1.0, 1.0);
        if x < cfg.cutoff() {
            b.push(x);
        }
    }
    b.sort_by(f64::total_cmp);
    let stat = ks_two_sample(&a, &b);
    assert!(
        stat < ks_two_sample_critical_1pct(n, n),
        "two-sample KS {stat} exceeds the 1% critical value"
    );
}

#[test]
fn conditional_cost_estimator_agrees_with_the_naive_path() {
    // At a small radius the outside event is common, so the plain estimator
    // (sample, truncate, transport) is affordable and pins down the
    // rare-event machinery: both must estimate the same expectation.
    let params = ModelParams::one_dim(0.0).unwrap();
    let n = 64;
    let cfg = TruncationConfig::for_sample_size(0.35, n).unwrap();
    let reps = 3000;

    let (cond_mean, cond_se) = truncation_cost_mc(&params, n, &cfg, reps, 9100).unwrap();

    let mut naive = Vec::with_capacity(reps);
    for rep in 0..reps {
        let sample_seed = seeds::derive(9200, &[rep as u64, 1]);
        let samples = sample_mu_alpha(&params, n, sample_seed).unwrap();
        let truncated =
            truncate_samples(&samples, &params, &cfg, seeds::derive(9200, &[rep as u64, 2]))
                .unwrap();
        let mu = DiscreteMeasure::from_sample_set(&samples).unwrap();
        let nu = DiscreteMeasure::from_sample_set(&truncated).unwrap();
        let (result, _) = w2_discrete_1d(&mu, &nu).unwrap();
        naive.push(result.squared);
    }
    let (naive_mean, naive_se) = laguerre_core::stats::mean_stderr(&naive);

    let gap = (cond_mean - naive_mean).abs();
    let sigma = (cond_se * cond_se + naive_se * naive_se).sqrt();
    assert!(
        gap <= 4.0 * sigma,
        "conditional {cond_mean:.4e} vs naive {naive_mean:.4e}, gap {gap:.2e} > 4σ = {:.2e}",
        4.0 * sigma
    );
}

#[test]
fn truncation_cost_decays_faster_than_one_over_n() {
    // With the radius tied to the sample size, the cost must vanish faster
    // than 1/n: the fitted log-log slope stays below -1.
    let params = ModelParams::one_dim(0.0).unwrap();
    let grid: Vec<usize> = (8..=13).map(|k| 1usize << k).collect();
    let mut log_n = Vec::new();
    let mut log_cost = Vec::new();
    for (i, &n) in grid.iter().enumerate() {
        let cfg = TruncationConfig::for_sample_size(3.0, n).unwrap();
        let (mean, _) =
            truncation_cost_mc(&params, n, &cfg, 240, seeds::derive(9300, &[i as u64]))
                .unwrap();
        assert!(mean > 0.0);
        log_n.push((n as f64).ln());
        log_cost.push(mean.ln());
    }
    let mean_x = log_n.iter().sum::<f64>() / log_n.len() as f64;
    let mean_y = log_cost.iter().sum::<f64>() / log_cost.len() as f64;
    let mut num = 0.0;
    let mut den = 0.0;
    for (x, y) in log_n.iter().zip(&log_cost) {
        num += (x - mean_x) * (y - mean_y);
        den += (x - mean_x) * (x - mean_x);
    }
    let slope = num / den;
    assert!(slope < -1.0, "fitted slope {slope} is not below -1");
}
