//! Bayesian wavelet shrinkage with an area-interaction prior on the tree of
//! coefficient indices.
//!
//! Each detail coefficient `d_jk` carries a count `ξ_jk` of prior points;
//! the coefficient is zero when the count is zero and otherwise normal with
//! variance `τ²ξ_jk`. The counts follow a clustered area-interaction
//! process on the tree, whose posterior is sampled exactly. Coefficients
//! are then drawn given the counts and summarised by their median, which
//! sets many of them exactly to zero.

mod lattice;
mod posterior;
mod signals;
mod study;
mod transform;

pub use lattice::{neighbourhood, HyperParams, LatticeFactor, LatticeModel, LatticeState, NeighbourhoodMap, Tier};
pub use posterior::{
    denoise, denoise_with, draw_coefficients, median_tree, posterior_draw, posterior_moments, universal_threshold,
    DenoiseResult, PosteriorDraw,
};
pub use signals::{checksum, standardise, TestFunction};
pub use study::{default_wavelet, run_simulation_study, StudyCell, StudyConfig};
pub use transform::{dwt, flat_index, idwt, level_position, CoefficientTree, Wavelet};
