//! The area-interaction prior on wavelet coefficient indices and the
//! four-factor form of its posterior.
//!
//! With `d_jk | ξ ~ N(0, τ²ξ_jk)` and `d̂_jk | d_jk ~ N(d_jk, σ²)`, the
//! coefficients integrate out and the posterior of the lattice process is
//!
//! ```text
//! p(ξ | d̂) ∝ λ^{N(ξ)} γ^{-m(U(ξ))} ∏ exp{-d̂²/2(σ²+τ²ξ)} ∏ {2π(σ²+τ²ξ)}^{-1/2}
//! ```
//!
//! relative to a unit-rate Poisson count at each index. Each of the four
//! products is monotone in `ξ`, so the posterior can be sampled exactly
//! with the generic engine, using a dominating rate that varies by site.

use crate::cftp::{FactorModel, LatticeRates, LogBounds, Monotonicity};
use crate::error::{Error, Result};

use super::transform::{flat_index, level_position, CoefficientTree};

/// The neighbourhood `B(j, k)` on a tree with `levels` detail levels, as
/// sorted flat indices. It holds the site itself, its parent, the parent's
/// neighbour on the side nearer the site, its two neighbours on its own
/// level, its two children and the children's outer neighbours. Positions
/// wrap around within a level; levels outside the tree are dropped.
pub fn neighbourhood(j: usize, k: usize, levels: usize) -> Vec<usize> {
    let wrap = |level: usize, pos: isize| -> usize {
        let width = 1isize << level;
        pos.rem_euclid(width) as usize
    };
    let k = k as isize;
    let mut out = vec![flat_index(j, k as usize)];
    if j > 0 {
        let parent = k.div_euclid(2);
        let side = if k % 2 == 0 { parent - 1 } else { parent + 1 };
        out.push(flat_index(j - 1, wrap(j - 1, parent)));
        out.push(flat_index(j - 1, wrap(j - 1, side)));
    }
    out.push(flat_index(j, wrap(j, k - 1)));
    out.push(flat_index(j, wrap(j, k + 1)));
    if j + 1 < levels {
        for c in 2 * k - 1..=2 * k + 2 {
            out.push(flat_index(j + 1, wrap(j + 1, c)));
        }
    }
    out.sort_unstable();
    out.dedup();
    out
}

/// `B(x)` for every detail index of a tree.
#[derive(Debug, Clone)]
pub struct NeighbourhoodMap {
    levels: usize,
    sets: Vec<Vec<usize>>,
}

impl NeighbourhoodMap {
    pub fn new(levels: usize) -> Self {
        let sets = (0..(1usize << levels) - 1)
            .map(|i| {
                let (j, k) = level_position(i);
                neighbourhood(j, k, levels)
            })
            .collect();
        Self { levels, sets }
    }

    pub fn levels(&self) -> usize {
        self.levels
    }

    pub fn get(&self, index: usize) -> &[usize] {
        &self.sets[index]
    }

    pub fn len(&self) -> usize {
        self.sets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sets.is_empty()
    }

    /// `M = max_x m{B(x)}`.
    pub fn max_size(&self) -> usize {
        self.sets.iter().map(Vec::len).max().unwrap_or(0)
    }
}

/// Prior and noise parameters of the lattice model.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HyperParams {
    pub sigma: f64,
    pub tau: f64,
    pub lambda: f64,
    pub gamma: f64,
    /// Posterior draws per estimate.
    pub draws: usize,
    /// Sites with `ln(λ_dom/λ)` above this are not tracked and are taken to
    /// be occupied when neighbours are evaluated.
    pub log_occupied_threshold: f64,
    /// Sites with `ln(λ_dom/λ)` above this get `d ~ N(d̂, σ²)` directly.
    pub log_direct_threshold: f64,
}

impl HyperParams {
    pub fn new(sigma: f64) -> Self {
        Self {
            sigma,
            tau: 1.0,
            lambda: 0.05,
            gamma: 3.0,
            draws: 25,
            log_occupied_threshold: 4.0,
            log_direct_threshold: 20.0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [("sigma", self.sigma), ("tau", self.tau), ("lambda", self.lambda), ("gamma", self.gamma)] {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::InvalidModel(format!("{name} must be positive, got {v}")));
            }
        }
        if self.draws == 0 {
            return Err(Error::InvalidModel("at least one posterior draw is needed".into()));
        }
        let (occ, dir) = (self.log_occupied_threshold, self.log_direct_threshold);
        if occ.is_nan() || dir.is_nan() || occ > dir {
            return Err(Error::InvalidModel(
                "the direct-draw threshold must not be below the occupancy threshold".into(),
            ));
        }
        Ok(())
    }

    /// `ln λ_dom - ln λ = d̂²τ² / (2σ²(τ²+σ²))`.
    pub fn log_rate_excess(&self, dhat: f64) -> f64 {
        let (s2, t2) = (self.sigma * self.sigma, self.tau * self.tau);
        dhat * dhat * t2 / (2.0 * s2 * (t2 + s2))
    }

    /// `λ_dom = λ exp{d̂²τ² / (2σ²(τ²+σ²))}`, which may be infinite.
    pub fn dominating_rate(&self, dhat: f64) -> f64 {
        self.lambda * self.log_rate_excess(dhat).exp()
    }

    pub fn tier(&self, dhat: f64) -> Tier {
        let excess = self.log_rate_excess(dhat);
        if excess > self.log_direct_threshold {
            Tier::Direct
        } else if excess > self.log_occupied_threshold {
            Tier::Occupied
        } else {
            Tier::Exact
        }
    }
}

/// How a site is handled by the posterior sampler.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Tier {
    /// Sampled exactly.
    Exact,
    /// Assumed occupied; `ξ` replaced by the dominating count at time 0.
    Occupied,
    /// Assumed occupied; the coefficient is drawn from `N(d̂, σ²)`.
    Direct,
}

/// Which of the four posterior factors a factor index refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LatticeFactor {
    /// `λ^{N(ξ)}`.
    Rate,
    /// `γ^{-m(U(ξ))}`.
    Cover,
    /// `∏ exp{-d̂²/2(σ²+τ²ξ)}`.
    Likelihood,
    /// `∏ {2π(σ²+τ²ξ)}^{-1/2}`.
    Normaliser,
}

const FACTORS: [LatticeFactor; 4] =
    [LatticeFactor::Rate, LatticeFactor::Cover, LatticeFactor::Likelihood, LatticeFactor::Normaliser];

/// The posterior of `ξ` given observed detail coefficients.
#[derive(Debug, Clone)]
pub struct LatticeModel {
    hyper: HyperParams,
    dhat: Vec<f64>,
    map: NeighbourhoodMap,
    tiers: Vec<Tier>,
    /// Cover counts contributed by untracked sites, which are always occupied.
    base_cover: Vec<u32>,
    log_lambda: f64,
    log_gamma: f64,
    s2: f64,
    t2: f64,
    max_size: usize,
}

/// Counts per site and, per site, how many occupied sites cover it.
#[derive(Debug, Clone, PartialEq)]
pub struct LatticeState {
    pub counts: Vec<u32>,
    cover: Vec<u32>,
}

impl LatticeModel {
    pub fn new(observed: &CoefficientTree, hyper: HyperParams) -> Result<Self> {
        hyper.validate()?;
        let map = NeighbourhoodMap::new(observed.levels());
        let dhat = observed.details.clone();
        let tiers: Vec<Tier> = dhat.iter().map(|&d| hyper.tier(d)).collect();
        let mut base_cover = vec![0; dhat.len()];
        for (i, t) in tiers.iter().enumerate() {
            if *t != Tier::Exact {
                for &v in map.get(i) {
                    base_cover[v] += 1;
                }
            }
        }
        Ok(Self {
            log_lambda: hyper.lambda.ln(),
            log_gamma: hyper.gamma.ln(),
            s2: hyper.sigma * hyper.sigma,
            t2: hyper.tau * hyper.tau,
            max_size: map.max_size(),
            hyper,
            dhat,
            map,
            tiers,
            base_cover,
        })
    }

    pub fn hyper(&self) -> &HyperParams {
        &self.hyper
    }

    pub fn observed(&self) -> &[f64] {
        &self.dhat
    }

    pub fn tiers(&self) -> &[Tier] {
        &self.tiers
    }

    pub fn neighbourhoods(&self) -> &NeighbourhoodMap {
        &self.map
    }

    pub fn tracked_sites(&self) -> impl Iterator<Item = usize> + '_ {
        self.tiers.iter().enumerate().filter(|(_, t)| **t == Tier::Exact).map(|(i, _)| i)
    }

    /// Dominating rates of the tracked sites, or `None` when every site is
    /// handled by an approximation.
    pub fn space(&self) -> Result<Option<LatticeRates>> {
        let entries: Vec<(usize, f64)> = self
            .tracked_sites()
            .map(|i| (i, self.log_dominating_rate(&i).exp()))
            .collect();
        if entries.is_empty() {
            return Ok(None);
        }
        LatticeRates::new(entries).map(Some)
    }

    /// Probability that a dominating point at `site` starts in the lower
    /// process: `γ^{-M} (σ²/(τ²+σ²))^{1/2} exp{-d̂²τ²/(2σ²(τ²+σ²))}`.
    pub fn lower_keep_probability(&self, site: usize) -> f64 {
        self.log_lower_keep(&site).exp()
    }

    pub fn state_from(&self, counts: &[u32]) -> LatticeState {
        let mut s = self.empty_state();
        for (site, &c) in counts.iter().enumerate() {
            for _ in 0..c {
                self.insert(&mut s, &site);
            }
        }
        s
    }

    /// Number of cells of `B(u)` not covered by occupied sites.
    pub fn uncovered(&self, site: usize, state: &LatticeState) -> usize {
        self.map.get(site).iter().filter(|&&v| state.cover[v] == 0).count()
    }

    /// `ln` of the unnormalised posterior, relative to unit-rate Poisson
    /// counts, for a configuration on the tracked sites.
    pub fn log_posterior(&self, counts: &[u32]) -> f64 {
        let state = self.state_from(counts);
        let covered = state.cover.iter().filter(|&&c| c > 0).count() as f64;
        let n: u32 = counts.iter().sum();
        let mut log = n as f64 * self.log_lambda - self.log_gamma * covered;
        for i in self.tracked_sites() {
            let v = self.s2 + self.t2 * counts[i] as f64;
            log += -self.dhat[i] * self.dhat[i] / (2.0 * v) - 0.5 * (2.0 * std::f64::consts::PI * v).ln();
        }
        log
    }
}

impl FactorModel for LatticeModel {
    type Site = usize;
    type State = LatticeState;

    fn factor_count(&self) -> usize {
        FACTORS.len()
    }

    fn direction(&self, factor: usize) -> Monotonicity {
        match FACTORS[factor] {
            LatticeFactor::Rate => Monotonicity::Constant,
            LatticeFactor::Cover if self.log_gamma > 0.0 => Monotonicity::Increasing,
            LatticeFactor::Cover if self.log_gamma < 0.0 => Monotonicity::Decreasing,
            LatticeFactor::Cover => Monotonicity::Constant,
            LatticeFactor::Likelihood => Monotonicity::Decreasing,
            LatticeFactor::Normaliser => Monotonicity::Increasing,
        }
    }

    fn log_bounds(&self, factor: usize, site: &usize) -> LogBounds {
        match FACTORS[factor] {
            LatticeFactor::Rate => LogBounds::constant(self.log_lambda),
            LatticeFactor::Cover => {
                let full = -self.log_gamma * self.max_size as f64;
                LogBounds::new(full.min(0.0), full.max(0.0))
            }
            LatticeFactor::Likelihood => LogBounds::new(0.0, self.hyper.log_rate_excess(self.dhat[*site])),
            LatticeFactor::Normaliser => LogBounds::new(0.5 * (self.s2 / (self.t2 + self.s2)).ln(), 0.0),
        }
    }

    fn log_ratio(&self, factor: usize, site: &usize, state: &LatticeState) -> f64 {
        let xi = state.counts[*site] as f64;
        match FACTORS[factor] {
            LatticeFactor::Rate => self.log_lambda,
            LatticeFactor::Cover => -self.log_gamma * self.uncovered(*site, state) as f64,
            LatticeFactor::Likelihood => {
                let d = self.dhat[*site];
                d * d * self.t2 / (2.0 * (self.s2 + self.t2 * xi) * (self.s2 + self.t2 * (xi + 1.0)))
            }
            LatticeFactor::Normaliser => {
                0.5 * ((self.t2 * xi + self.s2) / (self.t2 * (xi + 1.0) + self.s2)).ln()
            }
        }
    }

    fn empty_state(&self) -> LatticeState {
        LatticeState { counts: vec![0; self.dhat.len()], cover: self.base_cover.clone() }
    }

    fn insert(&self, state: &mut LatticeState, site: &usize) {
        state.counts[*site] += 1;
        if state.counts[*site] == 1 {
            for &v in self.map.get(*site) {
                state.cover[v] += 1;
            }
        }
    }

    fn remove(&self, state: &mut LatticeState, site: &usize) {
        state.counts[*site] -= 1;
        if state.counts[*site] == 0 {
            for &v in self.map.get(*site) {
                state.cover[v] -= 1;
            }
        }
    }
}
