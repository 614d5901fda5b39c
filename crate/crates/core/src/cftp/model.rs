/// How a factor's conditional intensity responds to growing the
/// configuration it is evaluated at.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Monotonicity {
    /// `X ⊆ Y` implies `ratio(u, X) <= ratio(u, Y)` (attractive).
    Increasing,
    /// `X ⊆ Y` implies `ratio(u, X) >= ratio(u, Y)` (repulsive).
    Decreasing,
    /// The ratio does not depend on the configuration.
    Constant,
}

/// Natural-log bounds on a factor's conditional intensity at one site.
/// `lower` may be `-inf` when the factor can vanish.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogBounds {
    pub lower: f64,
    pub upper: f64,
}

impl LogBounds {
    pub fn new(lower: f64, upper: f64) -> Self {
        debug_assert!(lower <= upper, "inverted bounds [{lower}, {upper}]");
        Self { lower, upper }
    }

    pub fn constant(value: f64) -> Self {
        Self { lower: value, upper: value }
    }
}

/// A target density written as an ordered product of monotone factors.
///
/// All ratios and bounds are in natural-log space so that parameters such as
/// `γ = 10^-200` never under- or overflow. Implementations must be pure:
/// the engine may call `log_ratio` any number of times on the same state.
pub trait FactorModel {
    type Site: Clone + std::fmt::Debug;
    /// Per-process incremental state (occupancy, coverage fields, …).
    type State;

    fn factor_count(&self) -> usize;
    fn direction(&self, factor: usize) -> Monotonicity;
    fn log_bounds(&self, factor: usize, site: &Self::Site) -> LogBounds;
    /// `ln λ_{f_i}(u; X)` for the configuration held in `state`.
    fn log_ratio(&self, factor: usize, site: &Self::Site, state: &Self::State) -> f64;

    fn empty_state(&self) -> Self::State;
    fn insert(&self, state: &mut Self::State, site: &Self::Site);
    fn remove(&self, state: &mut Self::State, site: &Self::Site);

    /// `ln` of the dominating intensity at `site`: the product of the
    /// factors' upper bounds.
    fn log_dominating_rate(&self, site: &Self::Site) -> f64 {
        (0..self.factor_count())
            .map(|i| self.log_bounds(i, site).upper)
            .sum()
    }

    /// `ln` of the probability that a dominating point at `site` survives
    /// the initial thinning of the lower process.
    fn log_lower_keep(&self, site: &Self::Site) -> f64 {
        (0..self.factor_count())
            .map(|i| {
                let b = self.log_bounds(i, site);
                b.lower - b.upper
            })
            .sum()
    }

    /// `ln` of the full Papangelou conditional intensity `p(X ∪ {u}) / p(X)`.
    fn log_papangelou(&self, site: &Self::Site, state: &Self::State) -> f64 {
        (0..self.factor_count())
            .map(|i| self.log_ratio(i, site, state))
            .sum()
    }
}
