use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::rng::derive_seed;
use crate::spatial::{Point, SpatialPattern, Window};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SummaryKind {
    K,
    L,
    T,
    TransformedT,
}

/// An estimated summary function on a grid of distances.
#[derive(Debug, Clone, PartialEq)]
pub struct SummaryFunction {
    pub kind: SummaryKind,
    pub r: Vec<f64>,
    pub values: Vec<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum EdgeCorrection {
    #[default]
    Translation,
    /// Periodic distances on the window wrapped into a torus, with no
    /// weighting. Exact for patterns that are stationary on the torus.
    Torus,
}

/// `count` equally spaced distances from 0 to a quarter of the shorter side.
pub fn default_r_grid(window: &Window) -> Vec<f64> {
    let count = 512;
    let top = window.shorter_side() / 4.0;
    (0..count).map(|i| top * i as f64 / (count - 1) as f64).collect()
}

fn check_grid(window: &Window, r: &[f64]) -> Result<()> {
    if r.is_empty() {
        return Err(Error::InvalidInput("empty distance grid".into()));
    }
    if r.iter().any(|t| !t.is_finite() || *t < 0.0) || r.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidInput("distance grid must be finite, non-negative and strictly increasing".into()));
    }
    let last = r[r.len() - 1];
    if last >= window.shorter_side() / 2.0 {
        return Err(Error::InvalidInput(format!(
            "largest distance {last} must be below half the shorter window side"
        )));
    }
    Ok(())
}

fn displacement(a: &Point, b: &Point, window: &Window, edge: EdgeCorrection) -> (f64, f64) {
    let (mut dx, mut dy) = ((b.x - a.x).abs(), (b.y - a.y).abs());
    if edge == EdgeCorrection::Torus {
        dx = dx.min(window.width - dx);
        dy = dy.min(window.height - dy);
    }
    (dx, dy)
}

/// Sums `weight` over `(distance, weight)` items with distance at most each
/// grid value.
fn cumulate(mut items: Vec<(f64, f64)>, r: &[f64]) -> Vec<f64> {
    items.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut out = Vec::with_capacity(r.len());
    let (mut acc, mut i) = (0.0, 0);
    for &t in r {
        while i < items.len() && items[i].0 <= t {
            acc += items[i].1;
            i += 1;
        }
        out.push(acc);
    }
    out
}

pub fn estimate_k(pattern: &SpatialPattern, r: &[f64]) -> Result<SummaryFunction> {
    estimate_k_with(pattern, r, EdgeCorrection::Translation)
}

/// `K̂(t) = |W|² / (n(n-1)) Σ_{i≠j} 1{d_ij ≤ t} / w_ij`.
pub fn estimate_k_with(pattern: &SpatialPattern, r: &[f64], edge: EdgeCorrection) -> Result<SummaryFunction> {
    let n = pattern.len();
    if n < 2 {
        return Err(Error::InsufficientData { needed: 2, got: n });
    }
    let w = pattern.window;
    check_grid(&w, r)?;
    let rmax = r[r.len() - 1];
    let pts = &pattern.points;
    let mut items = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            let (dx, dy) = displacement(&pts[i], &pts[j], &w, edge);
            let d = dx.hypot(dy);
            if d > rmax {
                continue;
            }
            let weight = match edge {
                EdgeCorrection::Translation => 1.0 / ((w.width - dx) * (w.height - dy)),
                EdgeCorrection::Torus => 1.0 / w.area(),
            };
            // Both orderings of the pair.
            items.push((d, 2.0 * weight));
        }
    }
    let scale = w.area() * w.area() / (n as f64 * (n - 1) as f64);
    let values = cumulate(items, r).into_iter().map(|v| v * scale).collect();
    Ok(SummaryFunction { kind: SummaryKind::K, r: r.to_vec(), values })
}

pub fn estimate_l(pattern: &SpatialPattern, r: &[f64]) -> Result<SummaryFunction> {
    estimate_l_with(pattern, r, EdgeCorrection::Translation)
}

/// `L̂ = √(K̂/π)`.
pub fn estimate_l_with(pattern: &SpatialPattern, r: &[f64], edge: EdgeCorrection) -> Result<SummaryFunction> {
    let k = estimate_k_with(pattern, r, edge)?;
    Ok(SummaryFunction {
        kind: SummaryKind::L,
        values: k.values.iter().map(|v| (v / std::f64::consts::PI).sqrt()).collect(),
        r: k.r,
    })
}

/// Unordered triples whose three pairwise distances are all at most `t`.
pub fn triple_count(points: &[Point], t: f64) -> usize {
    let n = points.len();
    let mut count = 0;
    for i in 0..n {
        for j in i + 1..n {
            if points[i].distance(&points[j]) > t {
                continue;
            }
            for k in j + 1..n {
                if points[i].distance(&points[k]) <= t && points[j].distance(&points[k]) <= t {
                    count += 1;
                }
            }
        }
    }
    count
}

pub fn estimate_t(pattern: &SpatialPattern, r: &[f64]) -> Result<SummaryFunction> {
    estimate_t_with(pattern, r, EdgeCorrection::Translation)
}

/// `T̂(t) = |W|³ / (n(n-1)(n-2)) Σ 1{max pairwise distance ≤ t} / w_ijk`
/// over ordered triples of distinct points. Under complete spatial
/// randomness its expectation is `C t⁴` for a constant `C`.
pub fn estimate_t_with(pattern: &SpatialPattern, r: &[f64], edge: EdgeCorrection) -> Result<SummaryFunction> {
    let n = pattern.len();
    if n < 3 {
        return Err(Error::InsufficientData { needed: 3, got: n });
    }
    let w = pattern.window;
    check_grid(&w, r)?;
    let rmax = r[r.len() - 1];
    let pts = &pattern.points;
    let neighbours: Vec<Vec<usize>> = (0..n)
        .map(|i| {
            (i + 1..n)
                .filter(|&j| {
                    let (dx, dy) = displacement(&pts[i], &pts[j], &w, edge);
                    dx.hypot(dy) <= rmax
                })
                .collect()
        })
        .collect();
    let dist = |a: usize, b: usize| {
        let (dx, dy) = displacement(&pts[a], &pts[b], &w, edge);
        dx.hypot(dy)
    };
    let mut items = Vec::new();
    for i in 0..n {
        let near = &neighbours[i];
        for (a, &j) in near.iter().enumerate() {
            for &k in &near[a + 1..] {
                let djk = dist(j, k);
                if djk > rmax {
                    continue;
                }
                let d = dist(i, j).max(dist(i, k)).max(djk);
                let weight = match edge {
                    EdgeCorrection::Translation => {
                        let span = |f: fn(&Point) -> f64| {
                            let v = [f(&pts[i]), f(&pts[j]), f(&pts[k])];
                            v.iter().cloned().fold(f64::MIN, f64::max) - v.iter().cloned().fold(f64::MAX, f64::min)
                        };
                        1.0 / ((w.width - span(|p| p.x)) * (w.height - span(|p| p.y)))
                    }
                    EdgeCorrection::Torus => 1.0 / w.area(),
                };
                // All six orderings of the triple.
                items.push((d, 6.0 * weight));
            }
        }
    }
    let nf = n as f64;
    let scale = w.area().powi(3) / (nf * (nf - 1.0) * (nf - 2.0));
    let values = cumulate(items, r).into_iter().map(|v| v * scale).collect();
    Ok(SummaryFunction { kind: SummaryKind::T, r: r.to_vec(), values })
}

/// `(c·T̂(r))^{1/4} − r`, zero for a Poisson process when `c` is calibrated.
pub fn transform_t(t: &SummaryFunction, c: f64) -> Result<SummaryFunction> {
    if t.kind != SummaryKind::T {
        return Err(Error::InvalidInput(format!("expected a T estimate, got {:?}", t.kind)));
    }
    if !(c.is_finite() && c > 0.0) {
        return Err(Error::InvalidInput(format!("calibration constant must be positive, got {c}")));
    }
    let values = t.r.iter().zip(&t.values).map(|(r, v)| (c * v).powf(0.25) - r).collect();
    Ok(SummaryFunction { kind: SummaryKind::TransformedT, r: t.r.clone(), values })
}

/// Monte Carlo estimate of the constant that makes the transformed T
/// function vanish for a Poisson process.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TCalibration {
    /// The multiple `c` with `E[(c·T̂(r))^{1/4}] ≈ r`.
    pub c: f64,
    /// Least-squares estimate of the Poisson proportionality constant in
    /// `E[T̂(r)] = slope · r⁴`.
    pub slope: f64,
    pub simulations: usize,
}

/// Pooled least-squares fits over Poisson patterns of the given intensity:
/// `T̂(r) = slope · r⁴`, and `T̂(r)^{1/4} = k · r` with `c = k⁻⁴`. The second
/// fit sets `c`, since the fourth root of an unbiased estimate is biased low.
pub fn calibrate_t(window: Window, intensity: f64, r: &[f64], simulations: usize, seed: u64) -> Result<TCalibration> {
    if simulations == 0 {
        return Err(Error::InvalidInput("calibration needs at least one simulation".into()));
    }
    check_grid(&window, r)?;
    let sums = (0..simulations)
        .into_par_iter()
        .map(|s| -> Result<[f64; 4]> {
            let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(seed, s as u64));
            let pattern = SpatialPattern::poisson(window, intensity, &mut rng)?;
            if pattern.len() < 3 {
                return Ok([0.0; 4]);
            }
            let t = estimate_t(&pattern, r)?;
            Ok(r.iter().zip(&t.values).fold([0.0; 4], |[xy, xx, ry, rr], (r, v)| {
                let x = r.powi(4);
                [xy + x * v, xx + x * x, ry + r * v.powf(0.25), rr + r * r]
            }))
        })
        .collect::<Result<Vec<_>>>()?;
    let [xy, xx, ry, rr] = sums.iter().fold([0.0; 4], |a, b| [a[0] + b[0], a[1] + b[1], a[2] + b[2], a[3] + b[3]]);
    if !(xy > 0.0 && xx > 0.0 && ry > 0.0) {
        return Err(Error::InsufficientData { needed: 3, got: 0 });
    }
    Ok(TCalibration { c: (rr / ry).powi(4), slope: xy / xx, simulations })
}
