use rayon::prelude::*;

use crate::cftp::{run_cftp, CftpConfig};
use crate::error::{Error, Result};
use crate::rng::derive_seed;
use crate::spatial::{AreaInteractionModel, SpatialPattern};

use super::summary::{estimate_k, estimate_l, estimate_t, transform_t, SummaryFunction, SummaryKind};

/// A summary statistic that can be evaluated on a pattern.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Statistic {
    K,
    L,
    T,
    /// Transformed T function with calibration constant `c`.
    TransformedT { c: f64 },
}

impl Statistic {
    pub fn evaluate(&self, pattern: &SpatialPattern, r: &[f64]) -> Result<SummaryFunction> {
        match *self {
            Statistic::K => estimate_k(pattern, r),
            Statistic::L => estimate_l(pattern, r),
            Statistic::T => estimate_t(pattern, r),
            Statistic::TransformedT { c } => transform_t(&estimate_t(pattern, r)?, c),
        }
    }
}

/// Pointwise minimum, mean and maximum of simulated summary functions.
#[derive(Debug, Clone, PartialEq)]
pub struct Envelope {
    pub kind: SummaryKind,
    pub r: Vec<f64>,
    pub min: Vec<f64>,
    pub mean: Vec<f64>,
    pub max: Vec<f64>,
    pub simulations: usize,
}

impl Envelope {
    pub fn from_curves(curves: &[SummaryFunction]) -> Result<Self> {
        let first = curves
            .first()
            .ok_or(Error::InsufficientData { needed: 1, got: 0 })?;
        if curves.iter().any(|c| c.r != first.r || c.kind != first.kind) {
            return Err(Error::InvalidInput("curves differ in grid or kind".into()));
        }
        let len = first.r.len();
        let mut min = vec![f64::INFINITY; len];
        let mut max = vec![f64::NEG_INFINITY; len];
        let mut mean = vec![0.0; len];
        for c in curves {
            for (i, &v) in c.values.iter().enumerate() {
                min[i] = min[i].min(v);
                max[i] = max[i].max(v);
                mean[i] += v;
            }
        }
        let n = curves.len() as f64;
        for (m, (lo, hi)) in mean.iter_mut().zip(min.iter().zip(&max)) {
            // Rounding can push the mean of equal values just outside.
            *m = (*m / n).clamp(*lo, *hi);
        }
        Ok(Self { kind: first.kind, r: first.r.clone(), min, mean, max, simulations: curves.len() })
    }

    /// Fraction of grid points at which `values` lies within the envelope.
    pub fn coverage(&self, values: &[f64]) -> f64 {
        let inside = values
            .iter()
            .zip(self.min.iter().zip(&self.max))
            .filter(|(&v, (&lo, &hi))| lo <= v && v <= hi)
            .count();
        inside as f64 / values.len().max(1) as f64
    }
}

/// Envelope of `statistic` over `n_sims` patterns from `simulate`, which is
/// called with a distinct derived seed per simulation. Simulations run in
/// parallel and are merged in index order.
pub fn envelope<F>(n_sims: usize, seed: u64, statistic: Statistic, r: &[f64], simulate: F) -> Result<(Envelope, Vec<SummaryFunction>)>
where
    F: Fn(u64) -> Result<SpatialPattern> + Sync,
{
    if n_sims < 2 {
        return Err(Error::InvalidInput(format!("an envelope needs at least 2 simulations, got {n_sims}")));
    }
    let curves = (0..n_sims)
        .into_par_iter()
        .map(|i| statistic.evaluate(&simulate(derive_seed(seed, i as u64))?, r))
        .collect::<Result<Vec<_>>>()?;
    Ok((Envelope::from_curves(&curves)?, curves))
}

/// Envelope over exact draws from an area-interaction model.
pub fn simulate_envelope(
    model: &AreaInteractionModel,
    statistic: Statistic,
    r: &[f64],
    n_sims: usize,
    seed: u64,
    config: CftpConfig,
) -> Result<(Envelope, Vec<SummaryFunction>)> {
    envelope(n_sims, seed, statistic, r, |s| {
        let sample = run_cftp(model, model.space(), s, config)?;
        SpatialPattern::new(model.window(), sample.points)
    })
}
