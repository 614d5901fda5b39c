//! `selftest`: fast versions of the oracle-equivalence checks.

use clap::Args;
use rand::Rng;
use rand_distr::{Distribution, StandardNormal};

use domcftp::cftp::CftpConfig;
use domcftp::rng::stream_rng;
use domcftp::spatial::{AreaInteractionModel, MultiscaleParams, Resolution, Window};
use domcftp::wavelet::{denoise, dwt, idwt, CoefficientTree, HyperParams, LatticeModel, Wavelet};

use crate::error::{CliError, CliResult};
use crate::oracle::{lattice_cftp, spatial_cftp, spatial_rejection, total_variation, LatticeOracle};

#[derive(Debug, Clone, Args)]
pub struct SelftestArgs {
    /// Draws per oracle comparison.
    #[arg(long, default_value_t = 4000)]
    pub draws: usize,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
}

#[derive(Debug, Clone)]
pub struct Check {
    pub name: &'static str,
    pub pass: bool,
    pub detail: String,
}

/// A small lattice with every site sampled exactly.
pub fn oracle_lattice() -> (Vec<f64>, HyperParams) {
    let hyper = HyperParams { lambda: 0.2, gamma: 1.5, ..HyperParams::new(1.0) };
    (vec![2.5, 0.5, -2.0, 0.0, 1.0, 3.0, -0.2], hyper)
}

/// A multiscale model on a window of 5 x 5 coverage cells.
pub fn oracle_spatial() -> domcftp::Result<AreaInteractionModel> {
    let params = MultiscaleParams::from_log10(1.0, 0.5, -0.5, 0.3, 0.2)?;
    AreaInteractionModel::multiscale(Window::unit_square(), &params, Resolution::Fixed(0.2))
}

fn check(name: &'static str, pass: bool, detail: String) -> Check {
    Check { name, pass, detail }
}

pub fn run_checks(draws: usize, seed: u64) -> domcftp::Result<Vec<Check>> {
    let cftp = CftpConfig::default();
    let mut out = Vec::new();

    // Poisson reduction: both interactions switched off.
    let params = MultiscaleParams::from_log10(50.0, 0.0, 0.0, 0.05, 0.05)?;
    let model = AreaInteractionModel::multiscale(Window::unit_square(), &params, Resolution::default())?;
    let n = (draws / 10).max(50);
    let counts: Vec<f64> = spatial_cftp(&model, n, seed, cftp)?.iter().map(|p| p.len() as f64).collect();
    let mean = counts.iter().sum::<f64>() / n as f64;
    let se = (50.0 / n as f64).sqrt();
    out.push(check("poisson reduction", (mean - 50.0).abs() < 4.0 * se, format!("mean {mean:.2} over {n} draws, s.e. {se:.2}")));

    // Lattice posterior against rejection sampling.
    let (dhat, hyper) = oracle_lattice();
    let tree = CoefficientTree::new(3, 0.0, dhat.clone())?;
    let model = LatticeModel::new(&tree, hyper)?;
    let a = lattice_cftp(&model, draws, seed, cftp)?;
    let b = LatticeOracle::new(&dhat, 3, hyper).sample(draws, seed ^ 0x5eed)?;
    let total = |v: &[Vec<u32>]| v.iter().map(|x| x.iter().sum::<u32>()).collect::<Vec<_>>();
    let tv = total_variation(&total(&a), &total(&b));
    out.push(check("lattice oracle", tv < 0.05, format!("count total variation {tv:.4} over {draws} draws")));

    // Spatial model against rejection sampling.
    let model = oracle_spatial()?;
    let a: Vec<usize> = spatial_cftp(&model, draws, seed, cftp)?.iter().map(Vec::len).collect();
    let b: Vec<usize> = spatial_rejection(&model, draws, seed ^ 0x5eed, 1_000_000)?.iter().map(Vec::len).collect();
    let tv = total_variation(&a, &b);
    out.push(check("spatial oracle", tv < 0.05, format!("count total variation {tv:.4} over {draws} draws")));

    // Wavelet round trip.
    let mut rng = stream_rng(seed, 9);
    let mut worst: f64 = 0.0;
    for w in [Wavelet::Haar, Wavelet::La10] {
        for _ in 0..10 {
            let x: Vec<f64> = (0..256).map(|_| rng.random::<f64>() - 0.5).collect();
            let y = idwt(&dwt(&x, w)?, w);
            let num = x.iter().zip(&y).map(|(a, b)| (a - b).powi(2)).sum::<f64>().sqrt();
            let den = x.iter().map(|a| a * a).sum::<f64>().sqrt();
            worst = worst.max(num / den);
        }
    }
    out.push(check("wavelet round trip", worst < 1e-10, format!("worst relative error {worst:.2e}")));

    // Pure noise is mostly thresholded to zero.
    let noise: Vec<f64> = (0..256).map(|_| StandardNormal.sample(&mut rng)).collect();
    let res = denoise(&noise, &HyperParams::new(1.0), Wavelet::La10, seed)?;
    let z = res.zero_fraction();
    out.push(check("thresholding", z >= 0.5, format!("{:.1}% of detail coefficients are zero", 100.0 * z)));
    Ok(out)
}

pub fn run(args: &SelftestArgs) -> CliResult<()> {
    let checks = run_checks(args.draws, args.seed)?;
    for c in &checks {
        println!("{} {}: {}", if c.pass { "PASS" } else { "FAIL" }, c.name, c.detail);
    }
    let failed = checks.iter().filter(|c| !c.pass).count();
    if failed > 0 {
        return Err(CliError::Core(domcftp::Error::Invariant(format!("{failed} self-test check(s) failed"))));
    }
    Ok(())
}
