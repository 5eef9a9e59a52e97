//! Quadrature against μ^α in one dimension.
//!
//! Integrals are evaluated in the flat coordinate u = 2√x, where the weight
//! of μ^α becomes proportional to (u/2)^{2α+1} e^{-u²/4}; for α ≥ -1/2 the
//! exponent is nonnegative and the integrand is smooth up to u = 0, so plain
//! Gauss-Legendre panels converge rapidly. The window [0, U] is sized so the
//! μ^α mass beyond it is below the policy's tail allowance, and the panel
//! count is doubled until two successive refinements agree.

use crate::error::{Error, Result};
use crate::policy::NumericPolicy;
use crate::special::gamma::{gamma_q, ln_gamma};

/// Nodes and weights of the m-point Gauss-Legendre rule on [-1, 1],
/// computed by Newton iteration on the Legendre recurrence.
#[derive(Clone, Debug)]
pub struct GaussLegendre {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl GaussLegendre {
    pub fn new(m: usize) -> Self {
        assert!(m >= 2, "a quadrature rule needs at least two points");
        let mut nodes = vec![0.0; m];
        let mut weights = vec![0.0; m];
        let n = m as f64;
        for i in 0..m.div_ceil(2) {
            let mut x = (core::f64::consts::PI * (i as f64 + 0.75) / (n + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (p, d) = legendre_with_derivative(m, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() < 1e-15 {
                    break;
                }
            }
            nodes[i] = -x;
            nodes[m - 1 - i] = x;
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            weights[i] = w;
            weights[m - 1 - i] = w;
        }
        Self { nodes, weights }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// ∫_a^b f, mapped affinely from the reference interval.
    pub fn integrate<F: FnMut(f64) -> f64>(&self, a: f64, b: f64, mut f: F) -> f64 {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        let mut acc = 0.0;
        for (&x, &w) in self.nodes.iter().zip(&self.weights) {
            acc += w * f(mid + half * x);
        }
        acc * half
    }
}

fn legendre_with_derivative(m: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for j in 2..=m {
        let jj = j as f64;
        let p2 = ((2.0 * jj - 1.0) * x * p1 - (jj - 1.0) * p0) / jj;
        p0 = p1;
        p1 = p2;
    }
    let dp = m as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, dp)
}

/// ln of the μ^α weight in the flat coordinate:
/// w(u) du = (u/2)^{2α+1} e^{-u²/4} / Γ(1+α) du.
fn ln_flat_weight(alpha: f64, u: f64) -> f64 {
    let exponent = 2.0 * alpha + 1.0;
    let power = if exponent == 0.0 {
        0.0
    } else {
        exponent * (u / 2.0).ln()
    };
    power - u * u / 4.0 - ln_gamma(1.0 + alpha)
}

/// Upper end of the quadrature window in the flat coordinate: U = 2√c with
/// Q(α+1, c) at or below the requested tail mass.
pub fn flat_window(alpha: f64, tail_mass: f64) -> Result<f64> {
    let shape = alpha + 1.0;
    let mut c = 20.0 + 4.0 * shape;
    for _ in 0..200 {
        if gamma_q(shape, c)? <= tail_mass {
            return Ok(2.0 * c.sqrt());
        }
        c *= 1.3;
    }
    Err(Error::SpecialConvergence("quadrature window search"))
}

/// ∫_0^∞ f dμ^α for a single coordinate with exponent α.
pub fn integrate_mu<F: Fn(f64) -> f64>(alpha: f64, policy: &NumericPolicy, f: F) -> Result<f64> {
    let upper = flat_window(alpha, policy.quad_tail_mass)?;
    refine_panels(alpha, 0.0, upper, policy, &f)
}

/// ∫_{0}^{cutoff} f dμ^α, the same integrand restricted to {x ≤ cutoff}.
pub fn integrate_mu_below<F: Fn(f64) -> f64>(
    alpha: f64,
    cutoff: f64,
    policy: &NumericPolicy,
    f: F,
) -> Result<f64> {
    if cutoff.is_nan() || cutoff <= 0.0 {
        return Err(Error::SpecialDomain("integration cutoff must be positive"));
    }
    let window = flat_window(alpha, policy.quad_tail_mass)?;
    let upper = (2.0 * cutoff.sqrt()).min(window);
    refine_panels(alpha, 0.0, upper, policy, &f)
}

/// Mesh grading exponent toward u = 0.
///
/// The flat-coordinate weight behaves like u^{2α+1} at the origin. When the
/// exponent is a nonnegative integer the integrand is smooth and a uniform
/// mesh converges spectrally; otherwise the fractional power limits uniform
/// panels to algebraic order 2α+2, so the boundaries are compressed toward
/// zero to restore fast convergence.
fn grading_exponent(alpha: f64) -> f64 {
    let exponent = 2.0 * alpha + 1.0;
    if exponent >= -1e-12 && (exponent - exponent.round()).abs() < 1e-12 {
        return 1.0;
    }
    (4.0 / (2.0 * alpha + 2.0)).clamp(1.0, 8.0)
}

fn refine_panels<F: Fn(f64) -> f64>(
    alpha: f64,
    lo: f64,
    hi: f64,
    policy: &NumericPolicy,
    f: &F,
) -> Result<f64> {
    let rule = GaussLegendre::new(policy.quad_points);
    let grade = if lo == 0.0 { grading_exponent(alpha) } else { 1.0 };
    let mut panels = 4usize;
    let mut previous = f64::NAN;
    loop {
        let mut acc = 0.0;
        let span = hi - lo;
        for p in 0..panels {
            let a = lo + span * (p as f64 / panels as f64).powf(grade);
            let b = lo + span * ((p + 1) as f64 / panels as f64).powf(grade);
            acc += rule.integrate(a, b, |u| {
                ln_flat_weight(alpha, u).exp() * f(u * u / 4.0)
            });
        }
        if previous.is_finite() {
            let delta = (acc - previous).abs();
            if delta <= policy.quad_tol * acc.abs().max(1.0) {
                return Ok(acc);
            }
        }
        if panels >= policy.quad_max_panels {
            return Err(Error::QuadratureStall {
                panels,
                delta: (acc - previous).abs(),
            });
        }
        previous = acc;
        panels *= 2;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::special::gamma::gamma_p;

    #[test]
    fn gauss_legendre_integrates_polynomials_exactly() {
        let rule = GaussLegendre::new(8);
        // Degree up to 2m-1 = 15 is exact.
        let got = rule.integrate(0.0, 1.0, |x| x.powi(15));
        assert!((got - 1.0 / 16.0).abs() < 1e-14);
        let got = rule.integrate(-2.0, 3.0, |x| 3.0 * x * x);
        assert!((got - (27.0 + 8.0)).abs() < 1e-12);
    }

    #[test]
    fn gauss_legendre_weights_sum_to_interval_length() {
        for m in [2usize, 5, 16, 48] {
            let rule = GaussLegendre::new(m);
            let total: f64 = rule.weights.iter().sum();
            assert!((total - 2.0).abs() < 1e-13, "m={m}: {total}");
        }
    }

    #[test]
    fn total_mass_is_one() {
        let policy = NumericPolicy::default();
        for &alpha in &[-0.5, -0.25, 0.0, 1.0, 1.3, 2.0] {
            let mass = integrate_mu(alpha, &policy, |_| 1.0).unwrap();
            assert!((mass - 1.0).abs() < 1e-10, "alpha={alpha}: {mass}");
        }
    }

    #[test]
    fn first_and_second_moments_match_gamma_law() {
        let policy = NumericPolicy::default();
        for &alpha in &[-0.5, 0.0, 1.3] {
            let a = alpha + 1.0;
            let m1 = integrate_mu(alpha, &policy, |x| x).unwrap();
            let m2 = integrate_mu(alpha, &policy, |x| x * x).unwrap();
            assert!((m1 - a).abs() < 1e-9, "alpha={alpha}: m1={m1}");
            assert!((m2 - a * (a + 1.0)).abs() < 1e-8, "alpha={alpha}: m2={m2}");
        }
    }

    #[test]
    fn square_root_moment_closed_form() {
        // ∫ √x dμ^α = Γ(α + 3/2) / Γ(α + 1).
        let policy = NumericPolicy::default();
        for &alpha in &[-0.5, 0.0, 2.0] {
            let want = (ln_gamma::<f64>(alpha + 1.5) - ln_gamma::<f64>(alpha + 1.0)).exp();
            let got = integrate_mu(alpha, &policy, |x: f64| x.sqrt()).unwrap();
            assert!((got - want).abs() < 1e-9, "alpha={alpha}: {got} vs {want}");
        }
    }

    #[test]
    fn truncated_integral_matches_incomplete_gamma() {
        let policy = NumericPolicy::default();
        for &alpha in &[-0.5, 0.0, 1.3] {
            for &cutoff in &[0.5, 2.0, 9.0] {
                let got = integrate_mu_below(alpha, cutoff, &policy, |_| 1.0).unwrap();
                let want = gamma_p(alpha + 1.0, cutoff).unwrap();
                assert!(
                    (got - want).abs() < 1e-9,
                    "alpha={alpha} cutoff={cutoff}: {got} vs {want}"
                );
            }
        }
    }

    #[test]
    fn window_tail_is_small() {
        let u = flat_window(0.0, 1e-12).unwrap();
        let c = u * u / 4.0;
        assert!(gamma_q(1.0, c).unwrap() <= 1e-12);
        assert!(gamma_q(1.0, c / 1.7).unwrap() > 1e-12, "window far too wide");
    }

    #[test]
    fn oscillatory_integrand_converges() {
        let policy = NumericPolicy::default();
        // ∫ cos(x) e^{-x} dx on (0, ∞) = 1/2 for α = 0.
        let got = integrate_mu(0.0, &policy, |x: f64| x.cos()).unwrap();
        assert!((got - 0.5).abs() < 1e-9);
    }
}
