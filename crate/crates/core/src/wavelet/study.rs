use rand_distr::{Distribution, Normal};
use rayon::prelude::*;

use crate::cftp::CftpConfig;
use crate::error::{Error, Result};
use crate::rng::{derive_seed, stream_rng};

use super::lattice::HyperParams;
use super::posterior::{denoise_with, universal_threshold};
use super::signals::TestFunction;
use super::transform::Wavelet;

/// Haar for the piecewise-constant signal, LA-10 otherwise.
pub fn default_wavelet(f: TestFunction) -> Wavelet {
    match f {
        TestFunction::Blocks => Wavelet::Haar,
        _ => Wavelet::La10,
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct StudyConfig {
    pub n: usize,
    pub functions: Vec<TestFunction>,
    pub rsnr: Vec<f64>,
    pub replicates: usize,
    /// `sigma` is overwritten per cell with `1 / rsnr`.
    pub hyper: HyperParams,
    pub cftp: CftpConfig,
    pub seed: u64,
}

impl Default for StudyConfig {
    fn default() -> Self {
        Self {
            n: 256,
            functions: TestFunction::ALL.to_vec(),
            rsnr: vec![10.0, 7.0, 3.0],
            replicates: 25,
            hyper: HyperParams::new(1.0),
            cftp: CftpConfig::default(),
            seed: 2024,
        }
    }
}

/// Average mean-square errors for one (function, RSNR) cell, scaled by 10⁴.
#[derive(Debug, Clone, PartialEq)]
pub struct StudyCell {
    pub function: TestFunction,
    pub rsnr: f64,
    pub amse: f64,
    pub se: f64,
    pub baseline_amse: f64,
    pub baseline_se: f64,
    pub mean_horizon: f64,
    pub replicates: usize,
}

struct Replicate {
    mse: f64,
    baseline: f64,
    horizon: f64,
}

fn mean_se(x: &[f64]) -> (f64, f64) {
    let n = x.len() as f64;
    let mean = x.iter().sum::<f64>() / n;
    if x.len() < 2 {
        return (mean, f64::NAN);
    }
    let var = x.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, (var / n).sqrt())
}

fn mse(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).powi(2)).sum::<f64>() / a.len() as f64
}

fn cell_seed(seed: u64, f: TestFunction, rsnr: f64) -> u64 {
    let fi = TestFunction::ALL.iter().position(|g| *g == f).unwrap_or(0) as u64;
    derive_seed(derive_seed(seed, fi), rsnr.to_bits())
}

/// Runs every (function, RSNR, replicate) combination in parallel.
pub fn run_simulation_study(config: &StudyConfig) -> Result<Vec<StudyCell>> {
    if config.replicates == 0 {
        return Err(Error::InvalidInput("the study needs at least one replicate".into()));
    }
    if let Some(r) = config.rsnr.iter().find(|r| !(r.is_finite() && **r > 0.0)) {
        return Err(Error::InvalidInput(format!("RSNR must be positive, got {r}")));
    }
    let cells: Vec<(TestFunction, f64)> = config
        .functions
        .iter()
        .flat_map(|&f| config.rsnr.iter().map(move |&r| (f, r)))
        .collect();
    let jobs: Vec<(usize, usize)> = (0..cells.len())
        .flat_map(|c| (0..config.replicates).map(move |r| (c, r)))
        .collect();
    let results = jobs
        .par_iter()
        .map(|&(c, rep)| {
            let (f, rsnr) = cells[c];
            let truth = f.sample(config.n);
            let sigma = 1.0 / rsnr;
            let seed = derive_seed(cell_seed(config.seed, f, rsnr), rep as u64);
            let mut rng = stream_rng(seed, 0);
            let noise = Normal::new(0.0, sigma).map_err(|e| Error::InvalidInput(e.to_string()))?;
            let noisy: Vec<f64> = truth.iter().map(|t| t + noise.sample(&mut rng)).collect();
            let hyper = HyperParams { sigma, ..config.hyper };
            let wavelet = default_wavelet(f);
            let out = denoise_with(&noisy, &hyper, wavelet, derive_seed(seed, 1), config.cftp)?;
            let base = universal_threshold(&noisy, sigma, wavelet)?;
            let horizon = out.horizons.iter().sum::<f64>() / out.horizons.len() as f64;
            Ok(Replicate { mse: mse(&out.estimate, &truth), baseline: mse(&base, &truth), horizon })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(cells
        .iter()
        .enumerate()
        .map(|(c, &(function, rsnr))| {
            let reps = &results[c * config.replicates..(c + 1) * config.replicates];
            let (amse, se) = mean_se(&reps.iter().map(|r| r.mse * 1e4).collect::<Vec<_>>());
            let (baseline_amse, baseline_se) = mean_se(&reps.iter().map(|r| r.baseline * 1e4).collect::<Vec<_>>());
            StudyCell {
                function,
                rsnr,
                amse,
                se,
                baseline_amse,
                baseline_se,
                mean_horizon: reps.iter().map(|r| r.horizon).sum::<f64>() / reps.len() as f64,
                replicates: reps.len(),
            }
        })
        .collect())
}
