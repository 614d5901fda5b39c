//! `envelope`: summary functions of a data pattern against simulation
//! envelopes from a fitted model.

use std::path::{Path, PathBuf};

use clap::{Args, ValueEnum};
use rayon::prelude::*;

use domcftp::cftp::run_cftp;
use domcftp::rng::derive_seed;
use domcftp::spatial::SpatialPattern;
use domcftp::stats::{calibrate_t, Envelope, Statistic, SummaryFunction};

use super::{resolve_cftp, resolve_spatial, spatial_derived};
use crate::config::{require, set, RunConfig};
use crate::error::{CliError, CliResult};
use crate::io::{read_points, write_table, write_text};
use crate::svg::{line_plot, Series};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum StatChoice {
    L,
    T,
    Both,
}

impl StatChoice {
    fn parse(s: &str) -> CliResult<Self> {
        <Self as ValueEnum>::from_str(s, true).map_err(|_| CliError::Input(format!("unknown statistic {s:?}; expected L, T or both")))
    }

    fn name(self) -> &'static str {
        match self {
            StatChoice::L => "L",
            StatChoice::T => "T",
            StatChoice::Both => "both",
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct EnvelopeArgs {
    /// Data pattern, CSV with columns `x,y`.
    #[arg(long)]
    pub data: PathBuf,
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub sims: Option<usize>,
    #[arg(long, value_enum, ignore_case = true)]
    pub stat: Option<StatChoice>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long = "set", value_name = "KEY=VALUE")]
    pub overrides: Vec<String>,
}

fn r_grid(cfg: &mut RunConfig, side: f64) -> CliResult<Vec<f64>> {
    let r_max = *cfg.r_max.get_or_insert(side / 4.0);
    let points = *cfg.r_points.get_or_insert(512);
    if points < 2 || !(r_max > 0.0 && r_max < side / 2.0) {
        return Err(CliError::Input(format!(
            "r grid needs at least 2 points and 0 < r_max < {}, got {points} points up to {r_max}",
            side / 2.0
        )));
    }
    Ok((0..points).map(|i| r_max * i as f64 / (points - 1) as f64).collect())
}

fn emit(dir: &Path, name: &str, data: &SummaryFunction, env: &Envelope) -> CliResult<f64> {
    let rows: Vec<Vec<f64>> = (0..env.r.len())
        .map(|i| vec![env.r[i], data.values[i], env.min[i], env.mean[i], env.max[i]])
        .collect();
    write_table(&dir.join(format!("envelope_{name}.csv")), &["r", "data", "min", "mean", "max"], &rows)?;
    let plot = line_plot(
        &format!("{name} function, {} simulations", env.simulations),
        &[
            Series { label: "data", x: &env.r, y: &data.values, colour: "black", dashed: false },
            Series { label: "mean", x: &env.r, y: &env.mean, colour: "grey", dashed: true },
            Series { label: "min", x: &env.r, y: &env.min, colour: "steelblue", dashed: false },
            Series { label: "max", x: &env.r, y: &env.max, colour: "steelblue", dashed: false },
        ],
    );
    write_text(&dir.join(format!("envelope_{name}.svg")), &plot)?;
    Ok(env.coverage(&data.values))
}

pub fn run(args: &EnvelopeArgs) -> CliResult<()> {
    let mut cfg = RunConfig::load(args.config.as_deref(), &args.overrides)?;
    set(&mut cfg.sims, args.sims);
    set(&mut cfg.seed, args.seed);
    set(&mut cfg.out, args.out.clone());
    if let Some(s) = args.stat {
        cfg.stat = Some(s.name().into());
    }
    let points = read_points(&args.data)?;
    let seed = *cfg.seed.get_or_insert(1);
    let sims = *cfg.sims.get_or_insert(19);
    let stat = StatChoice::parse(cfg.stat.get_or_insert_with(|| "both".into()))?;
    let cftp = resolve_cftp(&mut cfg);
    let (model, params) = resolve_spatial(&mut cfg)?;
    let window = model.window();
    let data = SpatialPattern::new(window, points)?;
    let r = r_grid(&mut cfg, window.shorter_side())?;
    let want_t = stat != StatChoice::L;
    let calibration_sims = if want_t { Some(*cfg.calibration_sims.get_or_insert(100)) } else { None };
    require(&Some(sims).filter(|&s| s >= 2), "sims (at least 2)")?;

    let patterns = (0..sims)
        .into_par_iter()
        .map(|i| {
            let sample = run_cftp(&model, model.space(), derive_seed(derive_seed(seed, 1), i as u64), cftp)?;
            SpatialPattern::new(window, sample.points)
        })
        .collect::<domcftp::Result<Vec<_>>>()?;

    let mut derived = spatial_derived(&model, &params);
    let intensity = data.len() as f64 / window.area();
    derived.insert("data_points".into(), (data.len() as i64).into());
    derived.insert("data_intensity".into(), intensity.into());
    let mean_count = patterns.iter().map(|p| p.len()).sum::<usize>() as f64 / sims as f64;
    derived.insert("simulated_mean_count".into(), mean_count.into());

    let dir = cfg.out_dir()?;
    let curves = |s: Statistic| -> CliResult<(SummaryFunction, Envelope)> {
        let sim: Vec<SummaryFunction> = patterns
            .par_iter()
            .map(|p| s.evaluate(p, &r))
            .collect::<domcftp::Result<_>>()?;
        Ok((s.evaluate(&data, &r)?, Envelope::from_curves(&sim)?))
    };
    if stat != StatChoice::T {
        let (d, e) = curves(Statistic::L)?;
        let cov = emit(&dir, "L", &d, &e)?;
        derived.insert("coverage_L".into(), cov.into());
        println!("L: data inside the envelope at {:.1}% of r values", 100.0 * cov);
    }
    if let Some(n_cal) = calibration_sims {
        let cal = calibrate_t(window, intensity, &r, n_cal, derive_seed(seed, 2))?;
        derived.insert("calibration_c".into(), cal.c.into());
        derived.insert("calibration_slope".into(), cal.slope.into());
        let (d, e) = curves(Statistic::TransformedT { c: cal.c })?;
        let cov = emit(&dir, "T", &d, &e)?;
        derived.insert("coverage_T".into(), cov.into());
        println!("T: data inside the envelope at {:.1}% of r values (c = {:.6})", 100.0 * cov, cal.c);
    }
    cfg.write_resolved(&dir, derived)
}
