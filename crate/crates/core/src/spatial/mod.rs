//! Planar area-interaction processes.
//!
//! The standard process has density `α λ^{N(X)} γ^{-m(X ⊕ G)}` for a disc
//! grain `G`; the multiscale process multiplies two (or more) such terms
//! with different radii, one attractive (`γ ≥ 1`) and one repulsive
//! (`γ ≤ 1`). Areas of dilations are measured on a fine grid; see
//! [`CoverageGrid`].

mod coverage;
mod geometry;
mod model;

pub use coverage::{coverage_measure, incremental_coverage, CoverageField, CoverageGrid, Occupancy};
pub use geometry::{Grain, Point, SpatialPattern, UniformRate, Window};
pub use model::{
    AreaInteractionModel, InteractionTerm, MultiscaleParams, Resolution, SpatialFactor, SpatialState,
};
