//! `simulate`: independent exact draws from a multiscale area-interaction
//! model.

use std::path::PathBuf;

use clap::Args;
use rayon::prelude::*;

use domcftp::cftp::run_cftp;
use domcftp::rng::derive_seed;

use super::{resolve_cftp, resolve_spatial, spatial_derived};
use crate::config::{set, RunConfig};
use crate::error::{CliError, CliResult};
use crate::io::{write_points, write_records, write_text};
use crate::svg::scatter_plot;

#[derive(Debug, Clone, Args)]
pub struct SimulateArgs {
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub replicates: Option<usize>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Also write an SVG scatter plot per replicate.
    #[arg(long)]
    pub svg: bool,
    /// Override any config key, e.g. `--set lambda=50`.
    #[arg(long = "set", value_name = "KEY=VALUE")]
    pub overrides: Vec<String>,
}

pub fn run(args: &SimulateArgs) -> CliResult<()> {
    let mut cfg = RunConfig::load(args.config.as_deref(), &args.overrides)?;
    set(&mut cfg.seed, args.seed);
    set(&mut cfg.replicates, args.replicates);
    set(&mut cfg.out, args.out.clone());
    if args.svg {
        cfg.svg = Some(true);
    }
    let seed = *cfg.seed.get_or_insert(1);
    let replicates = *cfg.replicates.get_or_insert(1);
    let svg = *cfg.svg.get_or_insert(false);
    let cftp = resolve_cftp(&mut cfg);
    let (model, params) = resolve_spatial(&mut cfg)?;
    if replicates == 0 {
        return Err(CliError::Input("replicates must be at least 1".into()));
    }
    let dir = cfg.out_dir()?;
    cfg.write_resolved(&dir, spatial_derived(&model, &params))?;

    let results: Vec<_> = (0..replicates)
        .into_par_iter()
        .map(|i| run_cftp(&model, model.space(), derive_seed(seed, i as u64), cftp))
        .collect();

    let w = model.window();
    let mut rows = Vec::with_capacity(replicates);
    let mut failures = Vec::new();
    for (i, res) in results.into_iter().enumerate() {
        let rep_seed = derive_seed(seed, i as u64);
        match res {
            Ok(sample) => {
                write_points(&dir.join(format!("pattern_{i:03}.csv")), &sample.points)?;
                if svg {
                    let xs: Vec<f64> = sample.points.iter().map(|p| p.x).collect();
                    let ys: Vec<f64> = sample.points.iter().map(|p| p.y).collect();
                    let plot = scatter_plot(&format!("replicate {i}"), &xs, &ys, (w.x0, w.y0, w.width, w.height));
                    write_text(&dir.join(format!("pattern_{i:03}.svg")), &plot)?;
                }
                rows.push(vec![
                    i.to_string(),
                    rep_seed.to_string(),
                    "ok".into(),
                    sample.points.len().to_string(),
                    sample.horizon.to_string(),
                    sample.doublings.to_string(),
                    sample.stats.births.to_string(),
                ]);
            }
            Err(e) => {
                eprintln!("replicate {i} (seed {rep_seed}): {e}");
                let (status, horizon, doublings) = match &e {
                    domcftp::Error::NonCoalescence { horizon, doublings, .. } => {
                        ("non-coalescence", horizon.to_string(), doublings.to_string())
                    }
                    _ => ("error", String::new(), String::new()),
                };
                rows.push(vec![i.to_string(), rep_seed.to_string(), status.into(), String::new(), horizon, doublings, String::new()]);
                failures.push(e);
            }
        }
    }
    write_records(
        &dir.join("runs.csv"),
        &["replicate", "seed", "status", "points", "horizon", "doublings", "births"],
        &rows,
    )?;
    match failures.len() {
        0 => Ok(()),
        failed => Err(CliError::Replicates { failed, total: replicates, first: failures.swap_remove(0) }),
    }
}
