//! `denoise`: posterior-median wavelet estimate of a noisy signal.

use std::path::PathBuf;

use clap::Args;

use domcftp::wavelet::{denoise_with, dwt, level_position, HyperParams, Wavelet};

use super::resolve_cftp;
use crate::config::{require, set, RunConfig};
use crate::error::{CliError, CliResult};
use crate::io::{read_signal, write_table, write_text};
use crate::svg::{line_plot, Series};

#[derive(Debug, Clone, Args)]
pub struct DenoiseArgs {
    /// Noisy signal, one value per line, length a power of two.
    #[arg(long)]
    pub signal: PathBuf,
    /// Noise standard deviation.
    #[arg(long)]
    pub sigma: Option<f64>,
    #[arg(long)]
    pub tau: Option<f64>,
    #[arg(long)]
    pub lambda: Option<f64>,
    #[arg(long)]
    pub gamma: Option<f64>,
    #[arg(long)]
    pub draws: Option<usize>,
    /// `haar` or `la10`.
    #[arg(long)]
    pub wavelet: Option<String>,
    /// True signal, for reporting the mean-square error.
    #[arg(long)]
    pub truth: Option<PathBuf>,
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long = "set", value_name = "KEY=VALUE")]
    pub overrides: Vec<String>,
}

pub fn parse_wavelet(name: &str) -> CliResult<Wavelet> {
    match name.to_ascii_lowercase().as_str() {
        "haar" => Ok(Wavelet::Haar),
        "la10" | "sym10" => Ok(Wavelet::La10),
        _ => Err(CliError::Input(format!("unknown wavelet {name:?}; expected haar or la10"))),
    }
}

pub fn wavelet_name(w: Wavelet) -> &'static str {
    match w {
        Wavelet::Haar => "haar",
        Wavelet::La10 => "la10",
    }
}

/// Prior settings from `cfg`, with defaults filled in.
pub(crate) fn resolve_hyper(cfg: &mut RunConfig, sigma: f64) -> HyperParams {
    let d = HyperParams::new(sigma);
    HyperParams {
        sigma,
        tau: *cfg.tau.get_or_insert(d.tau),
        lambda: *cfg.lambda.get_or_insert(d.lambda),
        gamma: *cfg.gamma.get_or_insert(d.gamma),
        draws: *cfg.draws.get_or_insert(d.draws),
        log_occupied_threshold: *cfg.log_occupied_threshold.get_or_insert(d.log_occupied_threshold),
        log_direct_threshold: *cfg.log_direct_threshold.get_or_insert(d.log_direct_threshold),
    }
}

pub fn run(args: &DenoiseArgs) -> CliResult<()> {
    let mut cfg = RunConfig::load(args.config.as_deref(), &args.overrides)?;
    set(&mut cfg.sigma, args.sigma);
    set(&mut cfg.tau, args.tau);
    set(&mut cfg.lambda, args.lambda);
    set(&mut cfg.gamma, args.gamma);
    set(&mut cfg.draws, args.draws);
    set(&mut cfg.wavelet, args.wavelet.clone());
    set(&mut cfg.seed, args.seed);
    set(&mut cfg.out, args.out.clone());
    let signal = read_signal(&args.signal)?;
    let truth = args.truth.as_deref().map(read_signal).transpose()?;
    if let Some(t) = &truth {
        if t.len() != signal.len() {
            return Err(CliError::Input(format!("truth has {} samples, signal has {}", t.len(), signal.len())));
        }
    }
    let sigma = require(&cfg.sigma, "sigma")?;
    let seed = *cfg.seed.get_or_insert(1);
    let wavelet = parse_wavelet(cfg.wavelet.get_or_insert_with(|| "la10".into()))?;
    cfg.wavelet = Some(wavelet_name(wavelet).into());
    let hyper = resolve_hyper(&mut cfg, sigma);
    let cftp = resolve_cftp(&mut cfg);

    let result = denoise_with(&signal, &hyper, wavelet, seed, cftp)?;
    let observed = dwt(&signal, wavelet)?;

    let dir = cfg.out_dir()?;
    let index: Vec<f64> = (0..signal.len()).map(|i| i as f64).collect();
    let mut header = vec!["index", "observed", "estimate"];
    if truth.is_some() {
        header.push("truth");
    }
    let rows: Vec<Vec<f64>> = (0..signal.len())
        .map(|i| {
            let mut row = vec![index[i], signal[i], result.estimate[i]];
            row.extend(truth.as_ref().map(|t| t[i]));
            row
        })
        .collect();
    write_table(&dir.join("estimate.csv"), &header, &rows)?;
    let coef_rows: Vec<Vec<f64>> = observed
        .details
        .iter()
        .zip(&result.coefficients.details)
        .enumerate()
        .map(|(i, (o, e))| {
            let (j, k) = level_position(i);
            vec![i as f64, j as f64, k as f64, *o, *e]
        })
        .collect();
    write_table(&dir.join("coefficients.csv"), &["index", "level", "position", "observed", "estimate"], &coef_rows)?;

    let mut series = vec![
        Series { label: "observed", x: &index, y: &signal, colour: "lightgrey", dashed: false },
        Series { label: "estimate", x: &index, y: &result.estimate, colour: "firebrick", dashed: false },
    ];
    if let Some(t) = &truth {
        series.push(Series { label: "truth", x: &index, y: t, colour: "black", dashed: true });
    }
    write_text(&dir.join("estimate.svg"), &line_plot("Posterior median estimate", &series))?;

    let mut derived = toml::Table::new();
    derived.insert("n".into(), (signal.len() as i64).into());
    derived.insert("levels".into(), (observed.levels() as i64).into());
    derived.insert("exact_sites".into(), (result.exact_sites as i64).into());
    derived.insert("occupied_sites".into(), (result.occupied_sites as i64).into());
    derived.insert("direct_sites".into(), (result.direct_sites as i64).into());
    derived.insert("zero_fraction".into(), result.zero_fraction().into());
    let mean_h = result.horizons.iter().sum::<f64>() / result.horizons.len() as f64;
    derived.insert("mean_horizon".into(), mean_h.into());
    println!(
        "{} coefficients: {} exact, {} occupied, {} direct; {:.1}% of details set to zero",
        observed.details.len(),
        result.exact_sites,
        result.occupied_sites,
        result.direct_sites,
        100.0 * result.zero_fraction()
    );
    if let Some(t) = &truth {
        let mse = t.iter().zip(&result.estimate).map(|(a, b)| (a - b).powi(2)).sum::<f64>() / t.len() as f64;
        derived.insert("mse".into(), mse.into());
        println!("mean-square error against truth: {mse:.6}");
    }
    cfg.write_resolved(&dir, derived)
}
