//! `study`: average mean-square errors of the posterior-median estimator
//! over replicated noisy test signals.

use std::fmt::Write as _;
use std::path::PathBuf;

use clap::Args;

use domcftp::wavelet::{run_simulation_study, StudyCell, StudyConfig, TestFunction};

use super::denoise::resolve_hyper;
use super::resolve_cftp;
use crate::config::{set, RunConfig};
use crate::error::{CliError, CliResult};
use crate::io::{write_records, write_text};

#[derive(Debug, Clone, Args)]
pub struct StudyArgs {
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Cells to run: comma-separated `function:rsnr` pairs, where either
    /// side may be `*`, e.g. `blocks:10,*:7`. Defaults to the full grid.
    #[arg(long)]
    pub cells: Option<String>,
    #[arg(long)]
    pub replicates: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long = "set", value_name = "KEY=VALUE")]
    pub overrides: Vec<String>,
}

/// Expands a cell spec against the configured functions and RSNR values,
/// keeping grid order and dropping duplicates.
pub fn parse_cells(spec: &str, functions: &[TestFunction], rsnr: &[f64]) -> CliResult<Vec<(TestFunction, f64)>> {
    let mut wanted: Vec<(Option<TestFunction>, Option<f64>)> = Vec::new();
    for part in spec.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        let (f, r) = part.split_once(':').unwrap_or((part, "*"));
        let f = match f.trim() {
            "*" => None,
            name => Some(TestFunction::from_name(name)?),
        };
        let r = match r.trim() {
            "*" => None,
            v => Some(v.parse::<f64>().map_err(|_| CliError::Input(format!("bad RSNR {v:?} in cell spec")))?),
        };
        wanted.push((f, r));
    }
    if wanted.is_empty() {
        return Err(CliError::Input(format!("empty cell spec {spec:?}")));
    }
    // Explicit cells outside the configured grid are appended to it.
    let mut cells = Vec::new();
    let mut grid: Vec<(TestFunction, f64)> = functions.iter().flat_map(|&f| rsnr.iter().map(move |&r| (f, r))).collect();
    for (f, r) in &wanted {
        if let (Some(f), Some(r)) = (f, r) {
            if !grid.contains(&(*f, *r)) {
                grid.push((*f, *r));
            }
        }
    }
    for cell in grid {
        let hit = wanted.iter().any(|(f, r)| f.is_none_or(|f| f == cell.0) && r.is_none_or(|r| r == cell.1));
        if hit && !cells.contains(&cell) {
            cells.push(cell);
        }
    }
    if cells.is_empty() {
        return Err(CliError::Input(format!("cell spec {spec:?} selects nothing")));
    }
    Ok(cells)
}

/// Text table with one row per function and AMSE (s.e.) per RSNR.
pub fn format_table(cells: &[StudyCell]) -> String {
    let mut rsnr: Vec<f64> = Vec::new();
    let mut functions: Vec<TestFunction> = Vec::new();
    for c in cells {
        if !rsnr.contains(&c.rsnr) {
            rsnr.push(c.rsnr);
        }
        if !functions.contains(&c.function) {
            functions.push(c.function);
        }
    }
    let mut out = String::new();
    let _ = write!(out, "{:<10} {:>6}", "function", "rsnr");
    let _ = writeln!(out, " {:>18} {:>18}", "posterior median", "soft threshold");
    for f in &functions {
        for r in &rsnr {
            if let Some(c) = cells.iter().find(|c| c.function == *f && c.rsnr == *r) {
                let _ = writeln!(
                    out,
                    "{:<10} {:>6} {:>18} {:>18}",
                    f.name(),
                    r,
                    format!("{:.1} ({:.1})", c.amse, c.se),
                    format!("{:.1} ({:.1})", c.baseline_amse, c.baseline_se)
                );
            }
        }
    }
    out.push_str("AMSE x 10^4, standard errors in parentheses\n");
    out
}

pub fn run(args: &StudyArgs) -> CliResult<()> {
    let mut cfg = RunConfig::load(args.config.as_deref(), &args.overrides)?;
    set(&mut cfg.cells, args.cells.clone());
    set(&mut cfg.replicates, args.replicates);
    set(&mut cfg.seed, args.seed);
    set(&mut cfg.out, args.out.clone());
    let d = StudyConfig::default();
    let n = *cfg.n.get_or_insert(d.n);
    let replicates = *cfg.replicates.get_or_insert(d.replicates);
    let seed = *cfg.seed.get_or_insert(d.seed);
    let functions = cfg
        .functions
        .get_or_insert_with(|| d.functions.iter().map(|f| f.name().to_string()).collect())
        .iter()
        .map(|s| TestFunction::from_name(s))
        .collect::<domcftp::Result<Vec<_>>>()?;
    let rsnr = cfg.rsnr.get_or_insert_with(|| d.rsnr.clone()).clone();
    let cells = parse_cells(cfg.cells.get_or_insert_with(|| "*:*".into()), &functions, &rsnr)?;
    let hyper = resolve_hyper(&mut cfg, 1.0);
    let cftp = resolve_cftp(&mut cfg);

    let mut results = Vec::with_capacity(cells.len());
    for (f, r) in &cells {
        let sc = StudyConfig { n, functions: vec![*f], rsnr: vec![*r], replicates, hyper, cftp, seed };
        let cell = run_simulation_study(&sc)?;
        eprintln!("{} rsnr {}: {:.1} ({:.1})", f.name(), r, cell[0].amse, cell[0].se);
        results.extend(cell);
    }

    let dir = cfg.out_dir()?;
    let rows: Vec<Vec<String>> = results
        .iter()
        .map(|c| {
            vec![
                c.function.name().to_string(),
                c.rsnr.to_string(),
                c.amse.to_string(),
                c.se.to_string(),
                c.baseline_amse.to_string(),
                c.baseline_se.to_string(),
                c.mean_horizon.to_string(),
                c.replicates.to_string(),
            ]
        })
        .collect();
    write_records(
        &dir.join("study.csv"),
        &["function", "rsnr", "amse", "se", "baseline_amse", "baseline_se", "mean_horizon", "replicates"],
        &rows,
    )?;
    let table = format_table(&results);
    write_text(&dir.join("study.txt"), &table)?;
    print!("{table}");
    let mut derived = toml::Table::new();
    derived.insert("cells".into(), (results.len() as i64).into());
    cfg.write_resolved(&dir, derived)
}
