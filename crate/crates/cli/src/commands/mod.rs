pub mod denoise;
pub mod envelope;
pub mod selftest;
pub mod simulate;
pub mod study;

use domcftp::cftp::CftpConfig;
use domcftp::spatial::{AreaInteractionModel, MultiscaleParams, Resolution, Window};

use crate::config::{require, RunConfig};
use crate::error::CliResult;

/// Radius used for a scale whose interaction parameter is 1 and no radius
/// was given; such a scale has no effect.
const INERT_RADIUS: f64 = 0.05;

pub(crate) fn resolve_cftp(cfg: &mut RunConfig) -> CftpConfig {
    let d = CftpConfig::default();
    CftpConfig {
        initial_horizon: *cfg.initial_horizon.get_or_insert(d.initial_horizon),
        max_doublings: *cfg.max_doublings.get_or_insert(d.max_doublings),
    }
}

pub(crate) fn resolve_window(cfg: &mut RunConfig) -> CliResult<Window> {
    Ok(Window::new(
        *cfg.x0.get_or_insert(0.0),
        *cfg.y0.get_or_insert(0.0),
        *cfg.width.get_or_insert(1.0),
        *cfg.height.get_or_insert(1.0),
    )?)
}

fn resolve_log10(log10: &mut Option<f64>, direct: &mut Option<f64>) -> f64 {
    let v = match (*log10, *direct) {
        (Some(l), _) => l,
        (None, Some(g)) => g.log10(),
        (None, None) => 0.0,
    };
    // Keep only the log form in the echo so that it stays unambiguous.
    *direct = None;
    *log10 = Some(v);
    v
}

fn resolve_radius(r: &mut Option<f64>, log10_gamma: f64, key: &str) -> CliResult<f64> {
    if r.is_none() && log10_gamma == 0.0 {
        *r = Some(INERT_RADIUS);
    }
    require(r, key)
}

/// Builds the multiscale model described by `cfg`, filling in defaults.
pub(crate) fn resolve_spatial(cfg: &mut RunConfig) -> CliResult<(AreaInteractionModel, MultiscaleParams)> {
    let window = resolve_window(cfg)?;
    let lambda = require(&cfg.lambda, "lambda")? * *cfg.intensity_scale.get_or_insert(1.0);
    let g1 = resolve_log10(&mut cfg.log10_gamma1, &mut cfg.gamma1);
    let g2 = resolve_log10(&mut cfg.log10_gamma2, &mut cfg.gamma2);
    let r1 = resolve_radius(&mut cfg.r1, g1, "r1")?;
    let r2 = resolve_radius(&mut cfg.r2, g2, "r2")?;
    let mut params = MultiscaleParams::from_log10(lambda, g1, g2, r1, r2)?;
    if let Some(g3) = cfg.log10_gamma3 {
        params = params.with_third(g3, require(&cfg.r3, "r3")?)?;
    }
    let resolution = match cfg.grid_spacing {
        Some(h) => Resolution::Fixed(h),
        None => Resolution::PerGrain(*cfg.grid_per_radius.get_or_insert(20.0)),
    };
    let model = AreaInteractionModel::multiscale(window, &params, resolution)?;
    Ok((model, params))
}

/// Derived quantities of a spatial model, all in natural-log form as well
/// so that extreme interaction parameters stay readable.
pub(crate) fn spatial_derived(model: &AreaInteractionModel, params: &MultiscaleParams) -> toml::Table {
    let mut t = toml::Table::new();
    let dom = model.dominating_rate();
    let keep = model.lower_keep_probability();
    let area = model.window().area();
    t.insert("effective_lambda".into(), params.lambda.into());
    t.insert("dominating_rate".into(), dom.into());
    t.insert("log_dominating_rate".into(), dom.ln().into());
    t.insert("dominating_mean_count".into(), (dom * area).into());
    t.insert("lower_keep_probability".into(), keep.into());
    t.insert("log_lower_keep_probability".into(), keep.ln().into());
    t.insert("continuous_dominating_rate".into(), params.dominating_rate().into());
    let logs: Vec<toml::Value> = model.terms().iter().map(|term| term.log_gamma.into()).collect();
    t.insert("log_gamma".into(), logs.into());
    let discs: Vec<toml::Value> = (0..model.terms().len()).map(|i| model.disc_measure(i).into()).collect();
    t.insert("grid_disc_measure".into(), discs.into());
    t
}
