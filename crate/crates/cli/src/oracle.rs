//! Independent reference samplers used by `selftest` and the acceptance
//! suite.
//!
//! Both samplers draw from the dominating Poisson process and accept with
//! probability `p(X) / ∏ λ_dom(x)`, evaluating the full target density
//! directly. They share no acceptance logic with the coupling engine.

use std::collections::HashMap;
use std::hash::Hash;

use rand::Rng;
use rand_distr::{Distribution, Poisson};
use rayon::prelude::*;

use domcftp::cftp::{run_cftp, CftpConfig};
use domcftp::rng::{derive_seed, stream_rng};
use domcftp::spatial::{AreaInteractionModel, Point};
use domcftp::wavelet::{neighbourhood, HyperParams, LatticeModel};
use domcftp::{Error, Result};

fn poisson<R: Rng + ?Sized>(rng: &mut R, mean: f64) -> u64 {
    if mean <= 0.0 {
        return 0;
    }
    let v: f64 = Poisson::new(mean).expect("positive mean").sample(rng);
    v as u64
}

/// Rejection draws of point counts from a spatial model.
pub fn spatial_rejection(model: &AreaInteractionModel, draws: usize, seed: u64, max_tries: u64) -> Result<Vec<Vec<Point>>> {
    let w = model.window();
    let dom = model.dominating_rate();
    let log_dom = dom.ln();
    let log_empty = model.log_unnormalized_density(&[]);
    (0..draws)
        .into_par_iter()
        .map(|i| {
            let mut rng = stream_rng(derive_seed(seed, i as u64), 0);
            for _ in 0..max_tries {
                let n = poisson(&mut rng, dom * w.area());
                let pts: Vec<Point> = (0..n)
                    .map(|_| Point::new(w.x0 + rng.random::<f64>() * w.width, w.y0 + rng.random::<f64>() * w.height))
                    .collect();
                let log_acc = model.log_unnormalized_density(&pts) - log_empty - n as f64 * log_dom;
                if log_acc > 1e-9 {
                    return Err(Error::Invariant(format!("acceptance ratio exp({log_acc}) exceeds one")));
                }
                if rng.random::<f64>().ln() < log_acc {
                    return Ok(pts);
                }
            }
            Err(Error::InvalidInput(format!("rejection sampler gave up after {max_tries} proposals")))
        })
        .collect()
}

/// CFTP draws from a spatial model.
pub fn spatial_cftp(model: &AreaInteractionModel, draws: usize, seed: u64, config: CftpConfig) -> Result<Vec<Vec<Point>>> {
    (0..draws)
        .into_par_iter()
        .map(|i| run_cftp(model, model.space(), derive_seed(seed, i as u64), config).map(|s| s.points))
        .collect()
}

/// Lattice posterior written out directly from the hyperparameters, for
/// a tree whose every site is sampled exactly.
#[derive(Debug, Clone)]
pub struct LatticeOracle {
    dhat: Vec<f64>,
    hyper: HyperParams,
    sets: Vec<Vec<usize>>,
    log_dom: Vec<f64>,
}

impl LatticeOracle {
    pub fn new(dhat: &[f64], levels: usize, hyper: HyperParams) -> Self {
        let sets = (0..levels)
            .flat_map(|j| (0..1usize << j).map(move |k| neighbourhood(j, k, levels)))
            .collect();
        let (s2, t2) = (hyper.sigma.powi(2), hyper.tau.powi(2));
        let log_dom = dhat
            .iter()
            .map(|d| hyper.lambda.ln() + d * d * t2 / (2.0 * s2 * (s2 + t2)))
            .collect();
        Self { dhat: dhat.to_vec(), hyper, sets, log_dom }
    }

    /// `ln` posterior of counts `xi` relative to unit-rate Poisson counts.
    pub fn log_density(&self, xi: &[u32]) -> f64 {
        let (s2, t2) = (self.hyper.sigma.powi(2), self.hyper.tau.powi(2));
        let mut covered = vec![false; self.dhat.len()];
        let mut n = 0u32;
        let mut log = 0.0;
        for (i, &x) in xi.iter().enumerate() {
            n += x;
            if x > 0 {
                for &v in &self.sets[i] {
                    covered[v] = true;
                }
            }
            let var = s2 + t2 * x as f64;
            log -= self.dhat[i].powi(2) / (2.0 * var) + 0.5 * (2.0 * std::f64::consts::PI * var).ln();
        }
        let m = covered.iter().filter(|c| **c).count() as f64;
        log + n as f64 * self.hyper.lambda.ln() - m * self.hyper.gamma.ln()
    }

    pub fn sample(&self, draws: usize, seed: u64) -> Result<Vec<Vec<u32>>> {
        let empty = self.log_density(&vec![0; self.dhat.len()]);
        (0..draws)
            .into_par_iter()
            .map(|i| {
                let mut rng = stream_rng(derive_seed(seed, i as u64), 0);
                loop {
                    let xi: Vec<u32> = self.log_dom.iter().map(|l| poisson(&mut rng, l.exp()) as u32).collect();
                    let proposal: f64 = xi.iter().zip(&self.log_dom).map(|(&x, l)| x as f64 * l).sum();
                    let log_acc = self.log_density(&xi) - empty - proposal;
                    if log_acc > 1e-9 {
                        return Err(Error::Invariant(format!("acceptance ratio exp({log_acc}) exceeds one")));
                    }
                    if rng.random::<f64>().ln() < log_acc {
                        return Ok(xi);
                    }
                }
            })
            .collect()
    }
}

/// CFTP draws of site counts from a lattice model with every site tracked.
pub fn lattice_cftp(model: &LatticeModel, draws: usize, seed: u64, config: CftpConfig) -> Result<Vec<Vec<u32>>> {
    let space = model
        .space()?
        .ok_or_else(|| Error::InvalidModel("no site is sampled exactly".into()))?;
    let len = model.observed().len();
    (0..draws)
        .into_par_iter()
        .map(|i| {
            let s = run_cftp(model, space.clone(), derive_seed(seed, i as u64), config)?;
            let mut xi = vec![0u32; len];
            for site in s.points {
                xi[site] += 1;
            }
            Ok(xi)
        })
        .collect()
}

/// Total-variation distance between two empirical distributions.
pub fn total_variation<K: Hash + Eq + Clone>(a: &[K], b: &[K]) -> f64 {
    let mut freq: HashMap<K, (f64, f64)> = HashMap::new();
    for k in a {
        freq.entry(k.clone()).or_default().0 += 1.0 / a.len() as f64;
    }
    for k in b {
        freq.entry(k.clone()).or_default().1 += 1.0 / b.len() as f64;
    }
    0.5 * freq.values().map(|(p, q)| (p - q).abs()).sum::<f64>()
}
