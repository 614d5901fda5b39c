use super::model::{FactorModel, Monotonicity};
use super::space::Space;
use super::trajectory::{EventId, MarkedPoint, Trajectory};
use crate::error::{Error, Result};

/// Slack allowed when checking declared bounds and monotonicity in log space.
const LOG_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CftpConfig {
    /// First horizon `T0`; later passes use `2T0, 4T0, …`.
    pub initial_horizon: f64,
    pub max_doublings: u32,
}

impl Default for CftpConfig {
    fn default() -> Self {
        Self { initial_horizon: 1.0, max_doublings: 30 }
    }
}

/// Upper and lower processes started at `-horizon` and evolved up to `clock`.
///
/// Membership is kept per trajectory event (by position in
/// [`Trajectory::events`]), next to the model state of each process.
pub struct UpperLowerPair<M: FactorModel> {
    pub upper: M::State,
    pub lower: M::State,
    pub in_upper: Vec<bool>,
    pub in_lower: Vec<bool>,
    /// Dominating membership `D(clock)`.
    pub alive: Vec<bool>,
    pub clock: f64,
    pub horizon: f64,
    upper_len: usize,
    lower_len: usize,
}

impl<M: FactorModel> UpperLowerPair<M> {
    pub fn upper_len(&self) -> usize {
        self.upper_len
    }

    pub fn lower_len(&self) -> usize {
        self.lower_len
    }

    /// Lower is always a subset of upper, so equal sizes mean equal sets.
    pub fn coalesced(&self) -> bool {
        self.upper_len == self.lower_len
    }
}

/// Counters for one forward pass.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct PassStats {
    pub births: u64,
    pub deaths: u64,
    pub ratio_evaluations: u64,
    pub accepted_upper: u64,
    pub accepted_lower: u64,
}

/// Everything decided about one birth, reported before the pair is updated.
pub struct BirthDecision<'a, M: FactorModel> {
    pub time: f64,
    pub event: usize,
    pub point: &'a MarkedPoint<M::Site>,
    pub pair: &'a UpperLowerPair<M>,
    /// `ln` of the product of per-factor maxima over `λ_dom`.
    pub log_accept_upper: f64,
    /// `ln` of the product of per-factor minima over `λ_dom`.
    pub log_accept_lower: f64,
    pub accept_upper: bool,
    pub accept_lower: bool,
}

/// The pair right after a transition at `time`.
pub struct PairView<'a, M: FactorModel> {
    pub time: f64,
    pub events: &'a [MarkedPoint<M::Site>],
    pub pair: &'a UpperLowerPair<M>,
}

impl<M: FactorModel> PairView<'_, M> {
    fn ids(&self, flags: &[bool]) -> Vec<EventId> {
        let mut ids: Vec<EventId> = flags
            .iter()
            .enumerate()
            .filter(|(_, f)| **f)
            .map(|(i, _)| self.events[i].id)
            .collect();
        ids.sort_unstable();
        ids
    }

    pub fn upper_ids(&self) -> Vec<EventId> {
        self.ids(&self.pair.in_upper)
    }

    pub fn lower_ids(&self) -> Vec<EventId> {
        self.ids(&self.pair.in_lower)
    }

    pub fn dominating_ids(&self) -> Vec<EventId> {
        self.ids(&self.pair.alive)
    }
}

/// Hooks for instrumented runs. Both methods default to doing nothing.
pub trait PassObserver<M: FactorModel> {
    fn on_birth(&mut self, _decision: &BirthDecision<'_, M>) {}
    fn after_transition(&mut self, _view: &PairView<'_, M>) {}
}

pub struct NoopObserver;

impl<M: FactorModel> PassObserver<M> for NoopObserver {}

/// Result of a coalesced run.
#[derive(Debug, Clone)]
pub struct CftpSample<T> {
    /// The time-0 configuration, ordered by event id.
    pub points: Vec<T>,
    pub ids: Vec<EventId>,
    /// Horizon `T` of the pass that coalesced.
    pub horizon: f64,
    /// Number of horizon doublings needed (0 when `T0` sufficed).
    pub doublings: u32,
    /// Counters of the coalescing pass.
    pub stats: PassStats,
}

/// Starts the pair at `-horizon`: upper is `D(-T)`, lower keeps each
/// dominating point whose mark is at most `∏ lower_i / upper_i` at its site.
pub fn init_pair<M, S>(trajectory: &Trajectory<S>, model: &M, horizon: f64) -> Result<UpperLowerPair<M>>
where
    M: FactorModel,
    S: Space<Site = M::Site>,
{
    if horizon > trajectory.horizon() {
        return Err(Error::InvalidInput(format!(
            "trajectory covers {} but pair starts at -{horizon}",
            trajectory.horizon()
        )));
    }
    let events = trajectory.events();
    let t0 = -horizon;
    let mut pair = UpperLowerPair {
        upper: model.empty_state(),
        lower: model.empty_state(),
        in_upper: vec![false; events.len()],
        in_lower: vec![false; events.len()],
        alive: vec![false; events.len()],
        clock: t0,
        horizon,
        upper_len: 0,
        lower_len: 0,
    };
    for (i, e) in events.iter().enumerate() {
        if !e.alive_at(t0) {
            continue;
        }
        pair.alive[i] = true;
        pair.in_upper[i] = true;
        pair.upper_len += 1;
        model.insert(&mut pair.upper, &e.site);
        if e.mark.ln() <= model.log_lower_keep(&e.site) {
            pair.in_lower[i] = true;
            pair.lower_len += 1;
            model.insert(&mut pair.lower, &e.site);
        }
    }
    Ok(pair)
}

#[derive(Clone, Copy)]
enum Transition {
    Birth(usize),
    Death(usize),
}

/// Evolves an initialized pair forwards to time 0.
pub fn evolve_pair<M, S, O>(
    pair: &mut UpperLowerPair<M>,
    trajectory: &Trajectory<S>,
    model: &M,
    observer: &mut O,
) -> Result<PassStats>
where
    M: FactorModel,
    S: Space<Site = M::Site>,
    O: PassObserver<M>,
{
    let events = trajectory.events();
    let t0 = pair.clock;
    let mut timeline: Vec<(f64, Transition)> = Vec::new();
    for (i, e) in events.iter().enumerate() {
        if e.birth > t0 {
            timeline.push((e.birth, Transition::Birth(i)));
        }
        if let Some(d) = e.death {
            if d > t0 {
                timeline.push((d, Transition::Death(i)));
            }
        }
    }
    timeline.sort_by(|a, b| a.0.total_cmp(&b.0));

    let m = model.factor_count();
    let mut stats = PassStats::default();
    let mut upper_ratios = vec![0.0; m];
    let mut lower_ratios = vec![0.0; m];

    for (time, transition) in timeline {
        pair.clock = time;
        match transition {
            Transition::Birth(i) => {
                let e = &events[i];
                stats.births += 1;
                for f in 0..m {
                    upper_ratios[f] = model.log_ratio(f, &e.site, &pair.upper);
                    lower_ratios[f] = model.log_ratio(f, &e.site, &pair.lower);
                }
                stats.ratio_evaluations += 2 * m as u64;
                let (log_up, log_low) =
                    acceptance(model, trajectory.space(), &e.site, &upper_ratios, &lower_ratios)?;
                let log_mark = e.mark.ln();
                let accept_upper = log_mark < log_up;
                let accept_lower = log_mark < log_low;
                observer.on_birth(&BirthDecision {
                    time,
                    event: i,
                    point: e,
                    pair,
                    log_accept_upper: log_up,
                    log_accept_lower: log_low,
                    accept_upper,
                    accept_lower,
                });
                pair.alive[i] = true;
                if accept_upper {
                    pair.in_upper[i] = true;
                    pair.upper_len += 1;
                    stats.accepted_upper += 1;
                    model.insert(&mut pair.upper, &e.site);
                }
                if accept_lower {
                    pair.in_lower[i] = true;
                    pair.lower_len += 1;
                    stats.accepted_lower += 1;
                    model.insert(&mut pair.lower, &e.site);
                }
            }
            Transition::Death(i) => {
                let e = &events[i];
                stats.deaths += 1;
                pair.alive[i] = false;
                if pair.in_upper[i] {
                    pair.in_upper[i] = false;
                    pair.upper_len -= 1;
                    model.remove(&mut pair.upper, &e.site);
                }
                if pair.in_lower[i] {
                    pair.in_lower[i] = false;
                    pair.lower_len -= 1;
                    model.remove(&mut pair.lower, &e.site);
                }
            }
        }
        observer.after_transition(&PairView { time, events, pair });
    }
    pair.clock = 0.0;
    Ok(stats)
}

/// Log acceptance thresholds for the upper and lower processes, after
/// checking every ratio against the factor's declared bounds and direction.
fn acceptance<M, S>(
    model: &M,
    space: &S,
    site: &M::Site,
    upper_ratios: &[f64],
    lower_ratios: &[f64],
) -> Result<(f64, f64)>
where
    M: FactorModel,
    S: Space<Site = M::Site>,
{
    let log_dom = model.log_dominating_rate(site);
    let space_rate = space.rate_at(site).ln();
    if (space_rate - log_dom).abs() > 1e-9 * log_dom.abs().max(1.0) {
        return Err(Error::Invariant(format!(
            "dominating space rate e^{space_rate} disagrees with model bound e^{log_dom} at {site:?}"
        )));
    }
    let mut log_up = -log_dom;
    let mut log_low = -log_dom;
    for (f, (&ru, &rl)) in upper_ratios.iter().zip(lower_ratios).enumerate() {
        let b = model.log_bounds(f, site);
        for r in [ru, rl] {
            if r > b.upper + LOG_TOLERANCE || r < b.lower - LOG_TOLERANCE || r.is_nan() {
                return Err(Error::Invariant(format!(
                    "factor {f} ratio e^{r} outside declared bounds [e^{}, e^{}] at {site:?}",
                    b.lower, b.upper
                )));
            }
        }
        let consistent = match model.direction(f) {
            Monotonicity::Increasing => ru >= rl - LOG_TOLERANCE,
            Monotonicity::Decreasing => ru <= rl + LOG_TOLERANCE,
            Monotonicity::Constant => (ru - rl).abs() <= LOG_TOLERANCE,
        };
        if !consistent {
            return Err(Error::Invariant(format!(
                "factor {f} breaks its declared {:?} direction at {site:?}: upper e^{ru}, lower e^{rl}",
                model.direction(f)
            )));
        }
        log_up += ru.max(rl);
        log_low += ru.min(rl);
    }
    if log_up > LOG_TOLERANCE {
        return Err(Error::Invariant(format!(
            "upper acceptance probability e^{log_up} exceeds one at {site:?}"
        )));
    }
    Ok((log_up, log_low))
}

/// Runs dominated CFTP with horizons `T0, 2T0, 4T0, …` on one trajectory
/// until the upper and lower processes agree at time 0.
pub fn run_cftp<M, S>(model: &M, space: S, seed: u64, config: CftpConfig) -> Result<CftpSample<M::Site>>
where
    M: FactorModel,
    S: Space<Site = M::Site>,
{
    if !(config.initial_horizon.is_finite() && config.initial_horizon > 0.0) {
        return Err(Error::InvalidInput(format!(
            "initial horizon must be positive, got {}",
            config.initial_horizon
        )));
    }
    let mut trajectory = Trajectory::new(space, seed)?;
    let mut horizon = config.initial_horizon;
    let mut doublings = 0;
    loop {
        trajectory.extend_to(horizon)?;
        let mut pair = init_pair(&trajectory, model, horizon)?;
        let stats = evolve_pair(&mut pair, &trajectory, model, &mut NoopObserver)?;
        if pair.coalesced() {
            let mut chosen: Vec<&MarkedPoint<M::Site>> = trajectory
                .events()
                .iter()
                .zip(&pair.in_upper)
                .filter(|(_, inside)| **inside)
                .map(|(e, _)| e)
                .collect();
            chosen.sort_by_key(|e| e.id);
            return Ok(CftpSample {
                points: chosen.iter().map(|e| e.site.clone()).collect(),
                ids: chosen.iter().map(|e| e.id).collect(),
                horizon,
                doublings,
                stats,
            });
        }
        if doublings >= config.max_doublings {
            return Err(Error::NonCoalescence {
                doublings,
                horizon,
                upper: pair.upper_len(),
                lower: pair.lower_len(),
            });
        }
        doublings += 1;
        horizon *= 2.0;
    }
}
