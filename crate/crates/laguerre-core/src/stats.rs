//! Small statistical helpers shared by the laboratory's validation layers.

/// One-sample Kolmogorov-Smirnov statistic of sorted data against a CDF.
pub fn ks_statistic<F: Fn(f64) -> f64>(sorted: &[f64], cdf: F) -> f64 {
    let n = sorted.len() as f64;
    let mut worst = 0.0_f64;
    for (i, &x) in sorted.iter().enumerate() {
        let c = cdf(x);
        let hi = (i as f64 + 1.0) / n - c;
        let lo = c - i as f64 / n;
        worst = worst.max(hi).max(lo);
    }
    worst
}

/// Two-sample Kolmogorov-Smirnov statistic of two sorted samples.
pub fn ks_two_sample(a: &[f64], b: &[f64]) -> f64 {
    let (na, nb) = (a.len() as f64, b.len() as f64);
    let mut i = 0usize;
    let mut j = 0usize;
    let mut worst = 0.0_f64;
    while i < a.len() && j < b.len() {
        let v = a[i].min(b[j]);
        while i < a.len() && a[i] <= v {
            i += 1;
        }
        while j < b.len() && b[j] <= v {
            j += 1;
        }
        worst = worst.max((i as f64 / na - j as f64 / nb).abs());
    }
    worst
}

/// Asymptotic 1% critical value of the one-sample KS statistic.
pub fn ks_critical_1pct(n: usize) -> f64 {
    1.6276 / (n as f64).sqrt()
}

/// Asymptotic 1% critical value of the two-sample KS statistic.
pub fn ks_two_sample_critical_1pct(n: usize, m: usize) -> f64 {
    1.6276 * ((n + m) as f64 / (n as f64 * m as f64)).sqrt()
}

/// Sample mean and its standard error.
pub fn mean_stderr(values: &[f64]) -> (f64, f64) {
    let n = values.len() as f64;
    if values.is_empty() {
        return (f64::NAN, f64::NAN);
    }
    let mean = values.iter().sum::<f64>() / n;
    if values.len() < 2 {
        return (mean, f64::NAN);
    }
    let var = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (n - 1.0);
    (mean, (var / n).sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ks_of_perfect_grid_is_small() {
        // Points at the cell midpoints of the uniform law.
        let n = 1000;
        let sorted: Vec<f64> = (0..n).map(|i| (i as f64 + 0.5) / n as f64).collect();
        let stat = ks_statistic(&sorted, |x| x.clamp(0.0, 1.0));
        assert!(stat <= 0.5 / n as f64 + 1e-12);
    }

    #[test]
    fn ks_detects_a_shifted_sample() {
        let n = 1000;
        let sorted: Vec<f64> = (0..n).map(|i| 0.25 + 0.5 * (i as f64 + 0.5) / n as f64).collect();
        let stat = ks_statistic(&sorted, |x| x.clamp(0.0, 1.0));
        assert!(stat > 0.2);
    }

    #[test]
    fn two_sample_ks_of_identical_samples_is_zero() {
        let a: Vec<f64> = (0..100).map(|i| i as f64).collect();
        assert_eq!(ks_two_sample(&a, &a), 0.0);
    }

    #[test]
    fn mean_and_stderr_of_a_constant() {
        let (m, s) = mean_stderr(&[2.0, 2.0, 2.0, 2.0]);
        assert_eq!(m, 2.0);
        assert_eq!(s, 0.0);
    }
}
