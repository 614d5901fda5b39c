//! Dominated coupling from the past for locally stable point processes
//! whose density is a product of monotone factors,
//!
//! ```text
//! p(X) = α · f_1(X) · f_2(X) · … · f_m(X),
//! ```
//!
//! each `f_i` nondecreasing or nonincreasing under inclusion and with a
//! bounded conditional intensity `f_i(X ∪ {u}) / f_i(X)`.
//!
//! A birth at `u` is accepted into the upper process when its mark is below
//! `∏ max{r_i(u; U), r_i(u; L)} / λ_dom(u)` and into the lower process when it
//! is below the matching product of minima, where `r_i` is the ratio of
//! factor `i` and `U`, `L` are the current upper and lower configurations.
//! Monotonicity of each factor makes these the extremes over every
//! configuration sandwiched between `L` and `U`, so a birth costs exactly
//! two ratio evaluations per factor.

mod engine;
mod model;
mod space;
mod trajectory;

pub use engine::{
    evolve_pair, init_pair, run_cftp, BirthDecision, CftpConfig, CftpSample, NoopObserver,
    PairView, PassObserver, PassStats, UpperLowerPair,
};
pub use model::{FactorModel, LogBounds, Monotonicity};
pub use space::{LatticeRates, Space};
pub use trajectory::{simulate_dominating, EventId, MarkedPoint, Trajectory, DEFAULT_BLOCK_LENGTH};
