use rand::Rng;
use rand_distr::{Distribution, Normal, Poisson};
use rayon::prelude::*;

use crate::cftp::{run_cftp, CftpConfig};
use crate::error::{Error, Result};
use crate::rng::{derive_seed, stream_rng};

use super::lattice::{HyperParams, LatticeModel, Tier};
use super::transform::{dwt, idwt, CoefficientTree, Wavelet};

/// `(mean, variance)` of `d | d̂, ξ` for `ξ > 0`.
pub fn posterior_moments(dhat: f64, xi: f64, hyper: &HyperParams) -> (f64, f64) {
    let (s2, t2) = (hyper.sigma * hyper.sigma, hyper.tau * hyper.tau);
    let denom = s2 + t2 * xi;
    (t2 * xi * dhat / denom, s2 * t2 * xi / denom)
}

/// One draw of a site's `ξ` and the matching coefficient.
#[derive(Debug, Clone, PartialEq)]
pub struct PosteriorDraw {
    /// `ξ` per detail index; for untracked sites this is the surrogate
    /// count, and `None` for sites drawn directly.
    pub xi: Vec<Option<u32>>,
    pub coefficients: CoefficientTree,
    pub horizon: f64,
}

/// Draws detail coefficients given `ξ`: zero where `ξ = 0`, otherwise
/// normal with the conjugate moments. `None` entries are drawn from
/// `N(d̂, σ²)`. The scaling coefficient is copied from `observed`.
pub fn draw_coefficients<R: Rng + ?Sized>(
    xi: &[Option<u32>],
    observed: &CoefficientTree,
    hyper: &HyperParams,
    rng: &mut R,
) -> Result<CoefficientTree> {
    if xi.len() != observed.details.len() {
        return Err(Error::InvalidInput(format!(
            "{} counts for {} coefficients",
            xi.len(),
            observed.details.len()
        )));
    }
    let details = xi
        .iter()
        .zip(&observed.details)
        .map(|(x, &dhat)| {
            let (mean, var) = match x {
                Some(0) => return 0.0,
                Some(k) => posterior_moments(dhat, *k as f64, hyper),
                None => (dhat, hyper.sigma * hyper.sigma),
            };
            // Variance is positive for positive σ, τ and ξ.
            Normal::new(mean, var.sqrt()).expect("finite moments").sample(rng)
        })
        .collect();
    CoefficientTree::new(observed.levels(), observed.scaling, details)
}

/// One exact draw of `ξ` on the tracked sites, completed with surrogates
/// and coefficient draws elsewhere.
pub fn posterior_draw(model: &LatticeModel, observed: &CoefficientTree, seed: u64, config: CftpConfig) -> Result<PosteriorDraw> {
    let hyper = model.hyper();
    let mut xi: Vec<Option<u32>> = vec![Some(0); observed.details.len()];
    let mut horizon = 0.0;
    if let Some(space) = model.space()? {
        let sample = run_cftp(model, space, seed, config)?;
        for site in sample.points {
            if let Some(c) = xi[site].as_mut() {
                *c += 1;
            }
        }
        horizon = sample.horizon;
    }
    let mut rng = stream_rng(derive_seed(seed, 1), 0);
    for (i, tier) in model.tiers().iter().enumerate() {
        xi[i] = match tier {
            Tier::Exact => xi[i],
            Tier::Occupied => {
                let rate = hyper.dominating_rate(observed.details[i]);
                let draw: f64 = Poisson::new(rate)
                    .map_err(|e| Error::InvalidModel(format!("surrogate rate {rate}: {e}")))?
                    .sample(&mut rng);
                Some(draw as u32)
            }
            Tier::Direct => None,
        };
    }
    let coefficients = draw_coefficients(&xi, observed, hyper, &mut rng)?;
    Ok(PosteriorDraw { xi, coefficients, horizon })
}

/// Per-coefficient sample median of the draws; for an even number of draws
/// the lower of the two middle values, so exact zeros survive.
pub fn median_tree(draws: &[CoefficientTree]) -> Result<CoefficientTree> {
    let first = draws.first().ok_or(Error::InsufficientData { needed: 1, got: 0 })?;
    let r = draws.len();
    let mut column = vec![0.0; r];
    let details = (0..first.details.len())
        .map(|i| {
            for (c, d) in column.iter_mut().zip(draws) {
                *c = d.details[i];
            }
            column.sort_by(f64::total_cmp);
            column[(r - 1) / 2]
        })
        .collect();
    CoefficientTree::new(first.levels(), first.scaling, details)
}

#[derive(Debug, Clone, PartialEq)]
pub struct DenoiseResult {
    pub estimate: Vec<f64>,
    pub coefficients: CoefficientTree,
    /// Coalescence horizon of each draw (0 when no site was tracked).
    pub horizons: Vec<f64>,
    pub exact_sites: usize,
    pub occupied_sites: usize,
    pub direct_sites: usize,
}

impl DenoiseResult {
    /// Fraction of detail coefficients estimated as exactly zero.
    pub fn zero_fraction(&self) -> f64 {
        let d = &self.coefficients.details;
        d.iter().filter(|&&v| v == 0.0).count() as f64 / d.len() as f64
    }
}

/// Posterior-median wavelet estimate of a noisy signal.
pub fn denoise(signal: &[f64], hyper: &HyperParams, wavelet: Wavelet, seed: u64) -> Result<DenoiseResult> {
    denoise_with(signal, hyper, wavelet, seed, CftpConfig::default())
}

pub fn denoise_with(
    signal: &[f64],
    hyper: &HyperParams,
    wavelet: Wavelet,
    seed: u64,
    config: CftpConfig,
) -> Result<DenoiseResult> {
    hyper.validate()?;
    let observed = dwt(signal, wavelet)?;
    let model = LatticeModel::new(&observed, *hyper)?;
    let draws = (0..hyper.draws)
        .into_par_iter()
        .map(|r| posterior_draw(&model, &observed, derive_seed(seed, r as u64), config))
        .collect::<Result<Vec<_>>>()?;
    let trees: Vec<CoefficientTree> = draws.iter().map(|d| d.coefficients.clone()).collect();
    let coefficients = median_tree(&trees)?;
    let count = |t: Tier| model.tiers().iter().filter(|&&x| x == t).count();
    Ok(DenoiseResult {
        estimate: idwt(&coefficients, wavelet),
        horizons: draws.iter().map(|d| d.horizon).collect(),
        exact_sites: count(Tier::Exact),
        occupied_sites: count(Tier::Occupied),
        direct_sites: count(Tier::Direct),
        coefficients,
    })
}

/// Soft thresholding of all detail coefficients at `σ√(2 ln n)`.
pub fn universal_threshold(signal: &[f64], sigma: f64, wavelet: Wavelet) -> Result<Vec<f64>> {
    let mut tree = dwt(signal, wavelet)?;
    let thr = sigma * (2.0 * (signal.len() as f64).ln()).sqrt();
    for d in tree.details.iter_mut() {
        *d = d.signum() * (d.abs() - thr).max(0.0);
    }
    Ok(idwt(&tree, wavelet))
}
