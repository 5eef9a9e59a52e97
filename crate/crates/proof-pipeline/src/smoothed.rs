//! The smoothed empirical measure: each truncated sample point is replaced
//! by its time-t transition law, giving a measure with the density
//! f(y) = (1/n) Σ_j p_t(X_j, y) relative to the model measure.

use laguerre_core::error::Error as CoreError;
use laguerre_core::kernel::KernelEvaluator;
use laguerre_core::params::{ModelParams, Point};
use laguerre_core::sampling::{seeds, SampleSet};
use rand::Rng;

use crate::error::{Error, Result};
use crate::transition::transition_sample_coords;
use crate::truncation::TruncationConfig;

/// A truncated sample together with the smoothing time and a kernel
/// evaluator; every base point is certified to lie inside the ball at
/// construction.
#[derive(Debug)]
pub struct SmoothedEmpirical {
    base: SampleSet,
    t: f64,
    evaluator: KernelEvaluator,
}

impl SmoothedEmpirical {
    pub fn new(
        base: SampleSet,
        t: f64,
        params: ModelParams,
        cfg: &TruncationConfig,
    ) -> Result<Self> {
        if !t.is_finite() || t <= 0.0 {
            return Err(CoreError::NonPositiveTime(t).into());
        }
        if params.dim() != base.dim() {
            return Err(CoreError::DimensionMismatch {
                expected: params.dim(),
                got: base.dim(),
            }
            .into());
        }
        for (j, point) in base.points().enumerate() {
            for &value in point {
                if value >= cfg.cutoff() {
                    return Err(Error::PointOutsideBall {
                        point: j,
                        value,
                        cutoff: cfg.cutoff(),
                    });
                }
            }
        }
        Ok(Self {
            base,
            t,
            evaluator: KernelEvaluator::new(params),
        })
    }

    pub fn base(&self) -> &SampleSet {
        &self.base
    }

    pub fn t(&self) -> f64 {
        self.t
    }

    pub fn params(&self) -> &ModelParams {
        self.evaluator.params()
    }

    /// Density at y relative to the model measure:
    /// (1/n) Σ_j p_t(X_j, y) via the closed-form kernel.
    pub fn density(&self, y: &Point) -> Result<f64> {
        let mut acc = 0.0;
        for point in self.base.points() {
            let x = Point::new(point.to_vec())?;
            acc += self.evaluator.closed(self.t, &x, y)?;
        }
        Ok(acc / self.base.n() as f64)
    }

    /// One draw from the smoothed measure: a uniformly chosen base point,
    /// pushed through the time-t transition law.
    pub fn sample(&self, seed: u64) -> Result<Point> {
        let mut rng = seeds::stream(seed);
        let j = rng.random_range(0..self.base.n());
        let coords =
            transition_sample_coords(&mut rng, self.base.point(j), self.t, self.params())?;
        Ok(Point::new(coords)?)
    }

    /// m independent draws, one derived stream per draw, packed as a sample
    /// set for downstream transport estimates.
    pub fn sample_many(&self, m: usize, seed: u64) -> Result<SampleSet> {
        if m == 0 {
            return Err(CoreError::EmptySample.into());
        }
        let mut data = Vec::with_capacity(m * self.base.dim());
        for i in 0..m {
            let mut rng = seeds::stream(seeds::derive(seed, &[i as u64]));
            let j = rng.random_range(0..self.base.n());
            let coords =
                transition_sample_coords(&mut rng, self.base.point(j), self.t, self.params())?;
            data.extend_from_slice(&coords);
        }
        Ok(SampleSet::from_rows(self.base.dim(), seed, data)?)
    }
}
