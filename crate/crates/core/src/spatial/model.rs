use std::f64::consts::LN_10;

use crate::cftp::{FactorModel, LogBounds, Monotonicity};
use crate::error::{Error, Result};

use super::coverage::{CoverageGrid, Occupancy};
use super::geometry::{Grain, Point, UniformRate, Window};

/// How the coverage grid spacing is chosen for each grain.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Resolution {
    /// `h = r / k` for each grain radius `r`.
    PerGrain(f64),
    /// One absolute spacing for every grain.
    Fixed(f64),
}

impl Default for Resolution {
    fn default() -> Self {
        Resolution::PerGrain(20.0)
    }
}

impl Resolution {
    pub fn spacing(&self, grain: Grain) -> Result<f64> {
        let h = match *self {
            Resolution::PerGrain(k) => grain.radius / k,
            Resolution::Fixed(h) => h,
        };
        if !(h.is_finite() && h > 0.0) {
            return Err(Error::InvalidModel(format!("invalid grid resolution {self:?}")));
        }
        Ok(h)
    }
}

/// One `γ^{-m(X ⊕ G)}` term, with `γ` given by its natural log.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InteractionTerm {
    pub log_gamma: f64,
    pub grain: Grain,
}

impl InteractionTerm {
    pub fn from_log10(log10_gamma: f64, radius: f64) -> Result<Self> {
        if !log10_gamma.is_finite() {
            return Err(Error::InvalidModel(format!("log10 gamma must be finite, got {log10_gamma}")));
        }
        Ok(Self { log_gamma: log10_gamma * LN_10, grain: Grain::new(radius)? })
    }

    pub fn direction(&self) -> Monotonicity {
        if self.log_gamma > 0.0 {
            Monotonicity::Increasing
        } else if self.log_gamma < 0.0 {
            Monotonicity::Decreasing
        } else {
            Monotonicity::Constant
        }
    }
}

/// Parameters of the multiscale process with an attractive scale, a
/// repulsive scale and an optional third scale of either kind.
#[derive(Debug, Clone, PartialEq)]
pub struct MultiscaleParams {
    pub lambda: f64,
    pub attractive: InteractionTerm,
    pub repulsive: InteractionTerm,
    pub third: Option<InteractionTerm>,
}

impl MultiscaleParams {
    /// `γ₁ ≥ 1` and `0 < γ₂ ≤ 1` given directly.
    pub fn new(lambda: f64, gamma1: f64, gamma2: f64, r1: f64, r2: f64) -> Result<Self> {
        if !(gamma1 > 0.0 && gamma2 > 0.0) {
            return Err(Error::InvalidModel(format!(
                "interaction parameters must be positive, got {gamma1} and {gamma2}"
            )));
        }
        Self::from_log10(lambda, gamma1.log10(), gamma2.log10(), r1, r2)
    }

    /// Interaction parameters given as `log₁₀ γ`, so that values such as
    /// `γ₂ = 10^-200` are representable.
    pub fn from_log10(lambda: f64, log10_gamma1: f64, log10_gamma2: f64, r1: f64, r2: f64) -> Result<Self> {
        let p = Self {
            lambda,
            attractive: InteractionTerm::from_log10(log10_gamma1, r1)?,
            repulsive: InteractionTerm::from_log10(log10_gamma2, r2)?,
            third: None,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn with_third(mut self, log10_gamma: f64, radius: f64) -> Result<Self> {
        self.third = Some(InteractionTerm::from_log10(log10_gamma, radius)?);
        Ok(self)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.lambda.is_finite() && self.lambda > 0.0) {
            return Err(Error::InvalidModel(format!("lambda must be positive, got {}", self.lambda)));
        }
        if self.attractive.log_gamma < 0.0 {
            return Err(Error::InvalidModel("gamma1 must be at least 1".into()));
        }
        if self.repulsive.log_gamma > 0.0 {
            return Err(Error::InvalidModel("gamma2 must not exceed 1".into()));
        }
        Ok(())
    }

    pub fn terms(&self) -> Vec<InteractionTerm> {
        let mut t = vec![self.attractive, self.repulsive];
        t.extend(self.third);
        t
    }

    /// Dominating intensity `λ ∏_{γ<1} γ^{-πr²}` with exact disc areas.
    pub fn dominating_rate(&self) -> f64 {
        let log: f64 = self.terms().iter().map(|t| (-t.log_gamma * t.grain.area()).max(0.0)).sum();
        self.lambda * log.exp()
    }

    /// Lower thinning probability `∏ γ^{-|ln γ| πr²}` with exact disc areas,
    /// i.e. `γ₁^{-m(G₁)} γ₂^{m(G₂)}` for two scales.
    pub fn lower_keep_probability(&self) -> f64 {
        let log: f64 = self.terms().iter().map(|t| -t.log_gamma.abs() * t.grain.area()).sum();
        log.exp()
    }
}

/// Which part of the density a factor carries.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpatialFactor {
    /// The constant `λ`.
    Rate,
    /// `γ_t^{-Δm_t}`, optionally multiplied by `λ`.
    Term { index: usize, with_rate: bool },
}

/// Area-interaction density `λ^{N(X)} ∏_t γ_t^{-m(X ⊕ G_t)}` on a window.
#[derive(Debug, Clone)]
pub struct AreaInteractionModel {
    window: Window,
    log_lambda: f64,
    terms: Vec<InteractionTerm>,
    grids: Vec<Option<CoverageGrid>>,
    factors: Vec<SpatialFactor>,
}

/// Coverage state of one process: an occupancy per interacting term.
#[derive(Debug, Clone)]
pub struct SpatialState {
    fields: Vec<Option<Occupancy>>,
    count: usize,
}

impl SpatialState {
    pub fn len(&self) -> usize {
        self.count
    }

    pub fn is_empty(&self) -> bool {
        self.count == 0
    }
}

impl AreaInteractionModel {
    /// The single-scale process `λ^{N} γ^{-m(X ⊕ G)}` as one factor.
    pub fn standard(window: Window, lambda: f64, gamma: f64, grain: Grain, resolution: Resolution) -> Result<Self> {
        if !(gamma.is_finite() && gamma > 0.0) {
            return Err(Error::InvalidModel(format!("gamma must be positive, got {gamma}")));
        }
        let term = InteractionTerm { log_gamma: gamma.ln(), grain };
        Self::build(window, lambda, vec![term], false, resolution)
    }

    /// The multiscale process: factor 0 is `λ`, then one factor per scale.
    pub fn multiscale(window: Window, params: &MultiscaleParams, resolution: Resolution) -> Result<Self> {
        params.validate()?;
        Self::build(window, params.lambda, params.terms(), true, resolution)
    }

    fn build(
        window: Window,
        lambda: f64,
        terms: Vec<InteractionTerm>,
        separate_rate: bool,
        resolution: Resolution,
    ) -> Result<Self> {
        if !(lambda.is_finite() && lambda > 0.0) {
            return Err(Error::InvalidModel(format!("lambda must be positive, got {lambda}")));
        }
        let grids = terms
            .iter()
            .map(|t| {
                if t.log_gamma == 0.0 {
                    Ok(None)
                } else {
                    CoverageGrid::new(window, t.grain, resolution.spacing(t.grain)?).map(Some)
                }
            })
            .collect::<Result<Vec<_>>>()?;
        let mut factors = Vec::with_capacity(terms.len() + 1);
        if separate_rate {
            factors.push(SpatialFactor::Rate);
        }
        factors.extend((0..terms.len()).map(|index| SpatialFactor::Term {
            index,
            with_rate: !separate_rate && index == 0,
        }));
        let model = Self { window, log_lambda: lambda.ln(), terms, grids, factors };
        if !model.log_dominating_rate(&Point::new(window.x0, window.y0)).is_finite() {
            return Err(Error::InvalidModel("dominating rate overflows".into()));
        }
        Ok(model)
    }

    pub fn window(&self) -> Window {
        self.window
    }

    pub fn terms(&self) -> &[InteractionTerm] {
        &self.terms
    }

    pub fn factors(&self) -> &[SpatialFactor] {
        &self.factors
    }

    /// Grid measure of one disc for term `t` (`πr²` when the term is inert).
    pub fn disc_measure(&self, t: usize) -> f64 {
        match &self.grids[t] {
            Some(g) => g.disc_measure(),
            None => self.terms[t].grain.area(),
        }
    }

    fn term_log_bounds(&self, t: usize) -> (f64, f64) {
        let full = -self.terms[t].log_gamma * self.disc_measure(t);
        if self.grids[t].is_none() {
            (0.0, 0.0)
        } else {
            (full.min(0.0), full.max(0.0))
        }
    }

    /// Dominating intensity per unit area, using grid disc measures.
    pub fn dominating_rate(&self) -> f64 {
        self.log_dominating_rate(&Point::new(self.window.x0, self.window.y0)).exp()
    }

    /// Probability that a dominating point survives into the lower process.
    pub fn lower_keep_probability(&self) -> f64 {
        self.log_lower_keep(&Point::new(self.window.x0, self.window.y0)).exp()
    }

    /// The dominating space matching this model.
    pub fn space(&self) -> UniformRate {
        UniformRate { window: self.window, rate: self.dominating_rate() }
    }

    pub fn state_from(&self, points: &[Point]) -> SpatialState {
        let mut s = self.empty_state();
        for p in points {
            self.insert(&mut s, p);
        }
        s
    }

    /// Grid measure of `X ⊕ G_t` held in a state.
    pub fn coverage(&self, state: &SpatialState, t: usize) -> f64 {
        match (&self.grids[t], &state.fields[t]) {
            (Some(g), Some(o)) => g.measure(o),
            _ => 0.0,
        }
    }

    /// `ln` of the unnormalised density `λ^{N} ∏ γ_t^{-m_t(X)}`.
    pub fn log_unnormalized_density(&self, points: &[Point]) -> f64 {
        let s = self.state_from(points);
        let inter: f64 = (0..self.terms.len())
            .map(|t| -self.terms[t].log_gamma * self.coverage(&s, t))
            .sum();
        points.len() as f64 * self.log_lambda + inter
    }

    fn added_log(&self, t: usize, site: &Point, state: &SpatialState) -> f64 {
        match (&self.grids[t], &state.fields[t]) {
            (Some(g), Some(o)) => -self.terms[t].log_gamma * g.added_measure(o, site),
            _ => 0.0,
        }
    }
}

impl FactorModel for AreaInteractionModel {
    type Site = Point;
    type State = SpatialState;

    fn factor_count(&self) -> usize {
        self.factors.len()
    }

    fn direction(&self, factor: usize) -> Monotonicity {
        match self.factors[factor] {
            SpatialFactor::Rate => Monotonicity::Constant,
            SpatialFactor::Term { index, .. } if self.grids[index].is_none() => Monotonicity::Constant,
            SpatialFactor::Term { index, .. } => self.terms[index].direction(),
        }
    }

    fn log_bounds(&self, factor: usize, _site: &Point) -> LogBounds {
        match self.factors[factor] {
            SpatialFactor::Rate => LogBounds::constant(self.log_lambda),
            SpatialFactor::Term { index, with_rate } => {
                let (lo, hi) = self.term_log_bounds(index);
                let shift = if with_rate { self.log_lambda } else { 0.0 };
                LogBounds::new(lo + shift, hi + shift)
            }
        }
    }

    fn log_ratio(&self, factor: usize, site: &Point, state: &SpatialState) -> f64 {
        match self.factors[factor] {
            SpatialFactor::Rate => self.log_lambda,
            SpatialFactor::Term { index, with_rate } => {
                let shift = if with_rate { self.log_lambda } else { 0.0 };
                self.added_log(index, site, state) + shift
            }
        }
    }

    fn empty_state(&self) -> SpatialState {
        SpatialState {
            fields: self.grids.iter().map(|g| g.as_ref().map(CoverageGrid::empty)).collect(),
            count: 0,
        }
    }

    fn insert(&self, state: &mut SpatialState, site: &Point) {
        for (g, o) in self.grids.iter().zip(state.fields.iter_mut()) {
            if let (Some(g), Some(o)) = (g, o) {
                g.insert(o, site);
            }
        }
        state.count += 1;
    }

    fn remove(&self, state: &mut SpatialState, site: &Point) {
        for (g, o) in self.grids.iter().zip(state.fields.iter_mut()) {
            if let (Some(g), Some(o)) = (g, o) {
                g.remove(o, site);
            }
        }
        state.count -= 1;
    }
}
