//! Flat key-value run configuration.
//!
//! A run reads an optional TOML file, applies `--set key=value` overrides and
//! then the command's own flags. Every command writes the effective values
//! back out as `config.resolved.toml`, together with a `[derived]` table of
//! quantities computed from them. The echo is itself a valid config file.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{CliError, CliResult};

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub seed: Option<u64>,
    pub replicates: Option<usize>,
    pub out: Option<PathBuf>,
    pub svg: Option<bool>,

    // Observation window.
    pub x0: Option<f64>,
    pub y0: Option<f64>,
    pub width: Option<f64>,
    pub height: Option<f64>,

    // Spatial model. `lambda` is also the prior rate for the wavelet commands.
    pub lambda: Option<f64>,
    /// Multiplies `lambda` for the spatial model, e.g. to change area units.
    pub intensity_scale: Option<f64>,
    pub gamma1: Option<f64>,
    pub gamma2: Option<f64>,
    pub log10_gamma1: Option<f64>,
    pub log10_gamma2: Option<f64>,
    pub r1: Option<f64>,
    pub r2: Option<f64>,
    pub log10_gamma3: Option<f64>,
    pub r3: Option<f64>,
    /// Coverage grid cells per grain radius.
    pub grid_per_radius: Option<f64>,
    /// Absolute coverage grid spacing; overrides `grid_per_radius`.
    pub grid_spacing: Option<f64>,
    pub initial_horizon: Option<f64>,
    pub max_doublings: Option<u32>,

    // Envelopes.
    pub sims: Option<usize>,
    pub stat: Option<String>,
    pub r_max: Option<f64>,
    pub r_points: Option<usize>,
    pub calibration_sims: Option<usize>,

    // Wavelet shrinkage.
    pub sigma: Option<f64>,
    pub tau: Option<f64>,
    pub gamma: Option<f64>,
    pub draws: Option<usize>,
    pub wavelet: Option<String>,
    pub log_occupied_threshold: Option<f64>,
    pub log_direct_threshold: Option<f64>,

    // Simulation study.
    pub n: Option<usize>,
    pub functions: Option<Vec<String>>,
    pub rsnr: Option<Vec<f64>>,
    pub cells: Option<String>,

    /// Written by the echo; ignored on input.
    #[serde(skip_serializing)]
    pub derived: Option<toml::Table>,
}

impl RunConfig {
    /// Reads `path` (if any) and applies `key=value` overrides.
    pub fn load(path: Option<&Path>, overrides: &[String]) -> CliResult<Self> {
        let mut table = match path {
            Some(p) => {
                let text = std::fs::read_to_string(p).map_err(|e| CliError::io(p, e))?;
                toml::from_str::<toml::Table>(&text)
                    .map_err(|source| CliError::Config { path: p.to_path_buf(), source })?
            }
            None => toml::Table::new(),
        };
        for o in overrides {
            let (key, value) = o
                .split_once('=')
                .ok_or_else(|| CliError::Input(format!("override {o:?} is not key=value")))?;
            table.insert(key.trim().to_string(), parse_value(value.trim()));
        }
        let origin = path.map(Path::to_path_buf).unwrap_or_else(|| PathBuf::from("<overrides>"));
        table
            .try_into()
            .map_err(|source| CliError::Config { path: origin, source })
    }

    /// Writes the effective configuration plus derived values to
    /// `dir/config.resolved.toml`.
    pub fn write_resolved(&self, dir: &Path, derived: toml::Table) -> CliResult<()> {
        let body = toml::to_string(self).map_err(|e| CliError::Input(format!("cannot serialise config: {e}")))?;
        let mut text = body;
        if !derived.is_empty() {
            let mut wrapper = toml::Table::new();
            wrapper.insert("derived".into(), toml::Value::Table(derived));
            let extra = toml::to_string(&wrapper).map_err(|e| CliError::Input(format!("cannot serialise derived values: {e}")))?;
            text.push('\n');
            text.push_str(&extra);
        }
        crate::io::write_text(&dir.join("config.resolved.toml"), &text)
    }

    pub fn out_dir(&self) -> CliResult<PathBuf> {
        let dir = self.out.clone().unwrap_or_else(|| PathBuf::from("out"));
        std::fs::create_dir_all(&dir).map_err(|e| CliError::io(&dir, e))?;
        Ok(dir)
    }
}

fn parse_value(raw: &str) -> toml::Value {
    let doc = format!("v = {raw}");
    match toml::from_str::<toml::Table>(&doc) {
        Ok(mut t) => t.remove("v").unwrap_or_else(|| toml::Value::String(raw.into())),
        Err(_) => toml::Value::String(raw.into()),
    }
}

/// Fills `slot` from `value` when the flag was given.
pub fn set<T>(slot: &mut Option<T>, value: Option<T>) {
    if value.is_some() {
        *slot = value;
    }
}

pub fn require<T: Clone>(value: &Option<T>, key: &str) -> CliResult<T> {
    value
        .clone()
        .ok_or_else(|| CliError::Input(format!("missing required setting `{key}`")))
}
