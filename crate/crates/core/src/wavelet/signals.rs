//! The four standard Donoho–Johnstone test functions, sampled at
//! `t_i = i/n` for `i = 1..=n` and standardised to mean 0 and standard
//! deviation 1.

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TestFunction {
    Blocks,
    Bumps,
    Doppler,
    Heavisine,
}

const POSITIONS: [f64; 11] = [0.1, 0.13, 0.15, 0.23, 0.25, 0.40, 0.44, 0.65, 0.76, 0.78, 0.81];
const BLOCK_HEIGHTS: [f64; 11] = [4.0, -5.0, 3.0, -4.0, 5.0, -4.2, 2.1, 4.3, -3.1, 2.1, -4.2];
const BUMP_HEIGHTS: [f64; 11] = [4.0, 5.0, 3.0, 4.0, 5.0, 4.2, 2.1, 4.3, 3.1, 5.1, 4.2];
const BUMP_WIDTHS: [f64; 11] = [0.005, 0.005, 0.006, 0.01, 0.01, 0.03, 0.01, 0.01, 0.005, 0.008, 0.005];

/// `sign` with `sign(0) = 0`.
fn sign(x: f64) -> f64 {
    if x > 0.0 {
        1.0
    } else if x < 0.0 {
        -1.0
    } else {
        0.0
    }
}

impl TestFunction {
    pub const ALL: [TestFunction; 4] = [Self::Blocks, Self::Bumps, Self::Doppler, Self::Heavisine];

    pub fn name(&self) -> &'static str {
        match self {
            Self::Blocks => "blocks",
            Self::Bumps => "bumps",
            Self::Doppler => "doppler",
            Self::Heavisine => "heavisine",
        }
    }

    pub fn from_name(name: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|f| f.name().eq_ignore_ascii_case(name))
            .ok_or_else(|| Error::InvalidInput(format!("unknown test function {name:?}")))
    }

    /// The raw function value at `t`.
    pub fn eval(&self, t: f64) -> f64 {
        match self {
            Self::Blocks => POSITIONS
                .iter()
                .zip(BLOCK_HEIGHTS)
                .map(|(p, h)| h * (1.0 + sign(t - p)) / 2.0)
                .sum(),
            Self::Bumps => POSITIONS
                .iter()
                .zip(BUMP_HEIGHTS.iter().zip(BUMP_WIDTHS))
                .map(|(p, (h, w))| h / (1.0 + ((t - p) / w).abs()).powi(4))
                .sum(),
            Self::Doppler => {
                let eps = 0.05;
                (t * (1.0 - t)).sqrt() * (2.0 * std::f64::consts::PI * (1.0 + eps) / (t + eps)).sin()
            }
            Self::Heavisine => {
                4.0 * (4.0 * std::f64::consts::PI * t).sin() - sign(t - 0.3) - sign(0.72 - t)
            }
        }
    }

    /// `n` samples, centred and scaled to unit sample standard deviation.
    pub fn sample(&self, n: usize) -> Vec<f64> {
        let raw: Vec<f64> = (1..=n).map(|i| self.eval(i as f64 / n as f64)).collect();
        standardise(&raw)
    }
}

/// Centres `x` and scales it to unit standard deviation (`n - 1` divisor).
pub fn standardise(x: &[f64]) -> Vec<f64> {
    let n = x.len() as f64;
    let mean = x.iter().sum::<f64>() / n;
    let sd = (x.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0)).sqrt();
    x.iter().map(|v| (v - mean) / sd).collect()
}

/// FNV-1a over the IEEE bit patterns, for pinning generated vectors.
pub fn checksum(x: &[f64]) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for v in x {
        for b in v.to_bits().to_le_bytes() {
            h ^= b as u64;
            h = h.wrapping_mul(0x0000_0100_0000_01b3);
        }
    }
    h
}
