//! Summary functions of planar point patterns and Monte Carlo envelopes.
//!
//! All estimators use translation edge correction. For a rectangular
//! window `W` the weight of a pair is the area of `W ∩ (W - (x_j - x_i))`
//! and the weight of a triple is the area of the intersection of the three
//! translates, which for rectangles is the product of the window sides
//! minus the triple's coordinate spans.

mod envelope;
mod summary;

pub use envelope::{envelope, simulate_envelope, Envelope, Statistic};
pub use summary::{
    calibrate_t, default_r_grid, estimate_k, estimate_k_with, estimate_l, estimate_l_with, estimate_t,
    estimate_t_with, transform_t, triple_count, EdgeCorrection, SummaryFunction, SummaryKind, TCalibration,
};
