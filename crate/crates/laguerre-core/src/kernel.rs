//! Heat kernel of the Laguerre semigroup, in closed form and as a truncated
//! spectral sum.
//!
//! With q = e^{-t}, the one-dimensional kernel density with respect to μ^α is
//!
//! ```text
//! p_t^α(x, y) = Γ(1+α) · exp(-q(x+y)/(1-q)) / ((1-q) (q x y)^{α/2})
//!               · I_α( 2 √(q x y) / (1-q) ),
//! ```
//!
//! and the product over coordinates gives the kernel on the orthant. The
//! spectral form is Σ_n l_n^α(x) l_n^α(y) e^{-|n| t} over multi-indices n.
//! The Bessel factor grows like e^z, so the closed form is assembled in log
//! space by default.

use crate::error::{Error, Result};
use crate::params::{ModelParams, Point};
use crate::policy::NumericPolicy;
use crate::real::Real;
use crate::special::bessel::{bessel_i_scaled, ln_bessel_i_scaled};
use crate::special::gamma::ln_gamma;
use crate::special::laguerre::laguerre_orthonormal_sequence;

fn check_scalar_args<T: Real>(alpha: T, t: T, x: T, y: T) -> Result<()> {
    if !alpha.is_finite() || alpha <= -T::one() {
        return Err(Error::SpecialDomain("kernel exponent must satisfy α > -1"));
    }
    if !t.is_finite() || t <= T::zero() {
        return Err(Error::NonPositiveTime(t.to_f64().unwrap_or(f64::NAN)));
    }
    if !x.is_finite() || x <= T::zero() || !y.is_finite() || y <= T::zero() {
        return Err(Error::SpecialDomain("kernel arguments must be positive"));
    }
    Ok(())
}

/// ln p_t^α(x, y) for one coordinate.
///
/// The symmetric subexpressions are grouped so that swapping x and y takes
/// the identical floating-point path.
pub fn ln_kernel_closed_1d<T: Real>(alpha: T, t: T, x: T, y: T) -> Result<T> {
    check_scalar_args(alpha, t, x, y)?;
    let q = (-t).exp();
    let one_minus_q = -(-t).exp_m1();
    let xy = x * y;
    let z = T::of(2.0) * (q * xy).sqrt() / one_minus_q;
    let ln_scaled = ln_bessel_i_scaled(alpha, z)?;
    Ok(ln_gamma(alpha + T::one()) - q * (x + y) / one_minus_q - one_minus_q.ln()
        - alpha / T::of(2.0) * (x.ln() + y.ln() - t)
        + z
        + ln_scaled)
}

/// p_t^α(x, y) for one coordinate, assembled from linear-domain factors.
/// Overflows once the Bessel argument exceeds roughly 700; the log-domain
/// path has no such limit.
pub fn kernel_closed_1d_linear<T: Real>(alpha: T, t: T, x: T, y: T) -> Result<T> {
    check_scalar_args(alpha, t, x, y)?;
    let q = (-t).exp();
    let one_minus_q = -(-t).exp_m1();
    let xy = x * y;
    let z = T::of(2.0) * (q * xy).sqrt() / one_minus_q;
    let scaled = bessel_i_scaled(alpha, z)?;
    let gamma = ln_gamma(alpha + T::one()).exp();
    Ok(gamma * (-(q * (x + y)) / one_minus_q).exp() / (one_minus_q * (q * xy).powf(alpha / T::of(2.0)))
        * z.exp()
        * scaled)
}

/// Two-branch comparison function φ_t(x, y) for the kernel: on {xy small}
/// it keeps the flat-window shape, on {xy large} the Bessel asymptotics.
/// The kernel is bounded above and below by constant multiples of φ_t.
pub fn phi_comparison<T: Real>(alpha: T, t: T, x: T, y: T) -> Result<T> {
    check_scalar_args(alpha, t, x, y)?;
    let q = (-t).exp();
    let one_minus_q = -(-t).exp_m1();
    let xy = x * y;
    let threshold = one_minus_q * one_minus_q / (T::of(4.0) * q);
    let ln_phi = if xy < threshold {
        -(alpha + T::one()) * one_minus_q.ln() - q * (x + y) / one_minus_q
    } else {
        let root = (q * xy).sqrt();
        -(alpha / T::of(2.0) + T::of(0.25)) * (T::of(4.0) * q * xy).ln()
            - T::one()
            - one_minus_q.ln() / T::of(2.0)
            - (q * (x + y) - T::of(2.0) * root) / one_minus_q
    };
    Ok(ln_phi.exp())
}

/// Kernel evaluator bound to a parameter block and a numeric policy.
#[derive(Clone, Debug)]
pub struct KernelEvaluator {
    params: ModelParams,
    policy: NumericPolicy,
}

impl KernelEvaluator {
    pub fn new(params: ModelParams) -> Self {
        Self {
            params,
            policy: NumericPolicy::default(),
        }
    }

    pub fn with_policy(params: ModelParams, policy: NumericPolicy) -> Self {
        Self { params, policy }
    }

    pub fn params(&self) -> &ModelParams {
        &self.params
    }

    pub fn policy(&self) -> &NumericPolicy {
        &self.policy
    }

    pub fn spectral_cutoff(&self) -> u32 {
        self.policy.spectral_cutoff
    }

    pub fn log_domain(&self) -> bool {
        self.policy.log_domain
    }

    fn check_points(&self, t: f64, x: &Point, y: &Point) -> Result<()> {
        if x.dim() != self.params.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.params.dim(),
                got: x.dim(),
            });
        }
        if y.dim() != self.params.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.params.dim(),
                got: y.dim(),
            });
        }
        if !t.is_finite() || t <= 0.0 {
            return Err(Error::NonPositiveTime(t));
        }
        Ok(())
    }

    /// ln p_t^α(x, y), the sum of the coordinate logs.
    pub fn ln_closed(&self, t: f64, x: &Point, y: &Point) -> Result<f64> {
        self.check_points(t, x, y)?;
        let mut acc = 0.0;
        for ((&a, &xi), &yi) in self
            .params
            .alpha()
            .iter()
            .zip(x.coords())
            .zip(y.coords())
        {
            acc += ln_kernel_closed_1d(a, t, xi, yi)?;
        }
        Ok(acc)
    }

    /// p_t^α(x, y) in closed form.
    pub fn closed(&self, t: f64, x: &Point, y: &Point) -> Result<f64> {
        if self.policy.log_domain {
            self.ln_closed(t, x, y).map(f64::exp)
        } else {
            self.check_points(t, x, y)?;
            let mut acc = 1.0;
            for ((&a, &xi), &yi) in self
                .params
                .alpha()
                .iter()
                .zip(x.coords())
                .zip(y.coords())
            {
                acc *= kernel_closed_1d_linear(a, t, xi, yi)?;
            }
            Ok(acc)
        }
    }

    /// The on-diagonal value p_t^α(x, x).
    pub fn diagonal(&self, t: f64, x: &Point) -> Result<f64> {
        self.closed(t, x, x)
    }

    /// Truncated spectral sum Σ_{|n| ≤ cutoff} l_n(x) l_n(y) e^{-|n| t}.
    ///
    /// Eigenvalue decay is all that controls the truncation error, so the
    /// evaluator refuses times below the policy's `spectral_t_min`.
    pub fn spectral(&self, t: f64, x: &Point, y: &Point) -> Result<f64> {
        self.check_points(t, x, y)?;
        if t < self.policy.spectral_t_min {
            return Err(Error::SpectralFloor {
                t,
                t_min: self.policy.spectral_t_min,
            });
        }
        let cutoff = self.policy.spectral_cutoff as usize;
        // Per-degree weights S_m = Σ_{|n| = m} ∏_i l_{n_i}(x_i) l_{n_i}(y_i)
        // built by convolving the coordinate factors degree by degree.
        let mut bucket = vec![0.0_f64; cutoff + 1];
        bucket[0] = 1.0;
        for ((&a, &xi), &yi) in self
            .params
            .alpha()
            .iter()
            .zip(x.coords())
            .zip(y.coords())
        {
            let lx = laguerre_orthonormal_sequence(cutoff as u32, a, xi);
            let ly = laguerre_orthonormal_sequence(cutoff as u32, a, yi);
            let mut next = vec![0.0_f64; cutoff + 1];
            for m in 0..=cutoff {
                let mut acc = 0.0;
                for j in 0..=m {
                    acc += bucket[m - j] * lx[j] * ly[j];
                }
                next[m] = acc;
            }
            bucket = next;
        }
        let mut total = 0.0;
        for (m, &s) in bucket.iter().enumerate() {
            total += s * (-(m as f64) * t).exp();
        }
        Ok(total)
    }
}
