//! The dominating birth-death process, generated backwards from time 0.
//!
//! The dominating process is a spatial birth-death process with death rate
//! one per point and birth intensity given by a [`Space`]. It is reversible,
//! so it is generated backwards: the time-0 cross-section is a Poisson
//! configuration, and further back in time forward deaths arrive as a
//! Poisson stream, each carrying an exponential lifetime that fixes its
//! forward birth time.
//!
//! Time is cut into fixed blocks `[-(b+1)Δ, -bΔ)`. Block `b` is drawn from
//! its own ChaCha stream keyed by `(seed, b + 1)` (stream 0 holds the
//! time-0 cross-section), so an event's mark and times depend only on the
//! seed and the block it falls in. Extending the horizon never touches
//! events that already exist, and extending in two steps or one gives the
//! same trajectory.

use rand::Rng;
use rand_distr::{Distribution, Exp1, Poisson};

use super::space::Space;
use crate::error::{Error, Result};
use crate::rng::stream_rng;

pub const DEFAULT_BLOCK_LENGTH: f64 = 1.0;

/// Stable identifier of a dominating event: `(stream << 32) | index`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct EventId(pub u64);

impl EventId {
    fn new(stream: u64, index: u64) -> Self {
        debug_assert!(index < 1 << 32);
        Self((stream << 32) | index)
    }
}

/// One point of the dominating process over its whole lifetime.
#[derive(Debug, Clone, PartialEq)]
pub struct MarkedPoint<S> {
    pub id: EventId,
    pub site: S,
    /// Uniform `[0, 1)` mark shared by every pass that sees this point.
    pub mark: f64,
    pub birth: f64,
    /// `None` when the point is still alive at time 0.
    pub death: Option<f64>,
}

impl<S> MarkedPoint<S> {
    pub fn alive_at(&self, t: f64) -> bool {
        self.birth <= t && self.death.is_none_or(|d| t < d)
    }

    /// Whether the point exists at some time in `[-horizon, 0]`.
    pub fn within(&self, horizon: f64) -> bool {
        self.death.is_none_or(|d| d > -horizon)
    }
}

/// A dominating trajectory covering at least `[-horizon, 0]`.
#[derive(Debug, Clone)]
pub struct Trajectory<S: Space> {
    space: S,
    seed: u64,
    block_len: f64,
    blocks: u64,
    horizon: f64,
    events: Vec<MarkedPoint<S::Site>>,
}

/// Generates a dominating trajectory over `[-horizon, 0]`.
pub fn simulate_dominating<S: Space>(space: S, horizon: f64, seed: u64) -> Result<Trajectory<S>> {
    let mut traj = Trajectory::new(space, seed)?;
    traj.extend_to(horizon)?;
    Ok(traj)
}

impl<S: Space> Trajectory<S> {
    /// A trajectory holding only the time-0 cross-section.
    pub fn new(space: S, seed: u64) -> Result<Self> {
        Self::with_block_length(space, seed, DEFAULT_BLOCK_LENGTH)
    }

    pub fn with_block_length(space: S, seed: u64, block_len: f64) -> Result<Self> {
        let total = space.total_rate();
        if !(total.is_finite() && total > 0.0) {
            return Err(Error::InvalidModel(format!(
                "dominating rate must be finite and positive, got {total}"
            )));
        }
        if !(block_len.is_finite() && block_len > 0.0) {
            return Err(Error::InvalidInput(format!("block length must be positive, got {block_len}")));
        }
        let mut traj = Self {
            space,
            seed,
            block_len,
            blocks: 0,
            horizon: 0.0,
            events: Vec::new(),
        };
        traj.generate_present();
        Ok(traj)
    }

    pub fn space(&self) -> &S {
        &self.space
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn horizon(&self) -> f64 {
        self.horizon
    }

    /// Every generated event, including ones from the last block that lie
    /// beyond the horizon.
    pub fn events(&self) -> &[MarkedPoint<S::Site>] {
        &self.events
    }

    /// Events that exist somewhere in `[-horizon, 0]`.
    pub fn restricted(&self, horizon: f64) -> impl Iterator<Item = &MarkedPoint<S::Site>> {
        self.events.iter().filter(move |e| e.within(horizon))
    }

    /// The dominating configuration `D(t)`.
    pub fn configuration_at(&self, t: f64) -> impl Iterator<Item = &MarkedPoint<S::Site>> {
        self.events.iter().filter(move |e| e.alive_at(t))
    }

    pub fn extend_backward(&mut self, additional: f64) -> Result<()> {
        if !(additional.is_finite() && additional > 0.0) {
            return Err(Error::InvalidInput(format!(
                "backward extension must be positive, got {additional}"
            )));
        }
        self.extend_to(self.horizon + additional)
    }

    /// Makes sure the trajectory covers `[-horizon, 0]`.
    pub fn extend_to(&mut self, horizon: f64) -> Result<()> {
        if !(horizon.is_finite() && horizon > 0.0) {
            return Err(Error::InvalidInput(format!("horizon must be positive, got {horizon}")));
        }
        let needed = (horizon / self.block_len).ceil() as u64;
        while self.blocks < needed {
            self.generate_block(self.blocks);
            self.blocks += 1;
        }
        self.horizon = self.horizon.max(horizon);
        Ok(())
    }

    fn generate_present(&mut self) {
        let mut rng = stream_rng(self.seed, 0);
        let n = poisson(&mut rng, self.space.total_rate());
        for i in 0..n {
            let site = self.space.sample_site(&mut rng);
            let mark = rng.random::<f64>();
            let life: f64 = Exp1.sample(&mut rng);
            self.events.push(MarkedPoint {
                id: EventId::new(0, i),
                site,
                mark,
                birth: -life,
                death: None,
            });
        }
    }

    fn generate_block(&mut self, block: u64) {
        let stream = block + 1;
        let mut rng = stream_rng(self.seed, stream);
        let start = block as f64 * self.block_len;
        let n = poisson(&mut rng, self.space.total_rate() * self.block_len);
        for i in 0..n {
            let death = -(start + rng.random::<f64>() * self.block_len);
            let site = self.space.sample_site(&mut rng);
            let mark = rng.random::<f64>();
            let life: f64 = Exp1.sample(&mut rng);
            self.events.push(MarkedPoint {
                id: EventId::new(stream, i),
                site,
                mark,
                birth: death - life,
                death: Some(death),
            });
        }
    }
}

fn poisson<R: Rng + ?Sized>(rng: &mut R, mean: f64) -> u64 {
    if mean <= 0.0 {
        return 0;
    }
    // Poisson::new only fails for non-positive or non-finite means.
    let draw: f64 = Poisson::new(mean).expect("finite positive mean").sample(rng);
    draw as u64
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cftp::LatticeRates;

    fn lattice() -> LatticeRates {
        LatticeRates::uniform(4, 0.75).unwrap()
    }

    #[test]
    fn marks_and_times_are_well_formed() {
        let traj = simulate_dominating(lattice(), 5.0, 11).unwrap();
        assert!(!traj.events().is_empty());
        for e in traj.events() {
            assert!((0.0..1.0).contains(&e.mark));
            let d = e.death.unwrap_or(0.0);
            assert!(e.birth < d, "birth {} death {d}", e.birth);
            assert!(d <= 0.0);
        }
    }

    #[test]
    fn extension_keeps_existing_events() {
        let mut traj = simulate_dominating(lattice(), 2.5, 3).unwrap();
        let before: Vec<_> = traj.restricted(2.5).cloned().collect();
        traj.extend_backward(4.0).unwrap();
        let after: Vec<_> = traj.restricted(2.5).cloned().collect();
        assert_eq!(before, after);
        assert_eq!(traj.horizon(), 6.5);
    }

    #[test]
    fn split_and_joint_extensions_agree() {
        let mut a = simulate_dominating(lattice(), 1.0, 8).unwrap();
        a.extend_backward(1.5).unwrap();
        a.extend_backward(2.25).unwrap();
        let mut b = simulate_dominating(lattice(), 1.0, 8).unwrap();
        b.extend_backward(3.75).unwrap();
        let ra: Vec<_> = a.restricted(4.75).cloned().collect();
        let rb: Vec<_> = b.restricted(4.75).cloned().collect();
        assert_eq!(ra, rb);
    }

    #[test]
    fn ids_are_unique() {
        let traj = simulate_dominating(lattice(), 20.0, 1).unwrap();
        let ids: std::collections::HashSet<_> = traj.events().iter().map(|e| e.id).collect();
        assert_eq!(ids.len(), traj.events().len());
    }

    #[test]
    fn rejects_bad_horizons() {
        let mut traj = Trajectory::new(lattice(), 0).unwrap();
        assert!(traj.extend_to(0.0).is_err());
        assert!(traj.extend_backward(-1.0).is_err());
        assert!(traj.extend_to(f64::NAN).is_err());
    }

    #[test]
    fn cross_section_mean_matches_total_rate() {
        // Mean of D(-3) over seeds should be the total rate (3.0).
        let n = 4000;
        let total: usize = (0..n)
            .map(|s| simulate_dominating(lattice(), 3.0, s).unwrap().configuration_at(-3.0).count())
            .sum();
        let mean = total as f64 / n as f64;
        let se = (3.0f64 / n as f64).sqrt();
        assert!((mean - 3.0).abs() < 4.0 * se, "mean {mean}");
    }
}
