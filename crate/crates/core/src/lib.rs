//! Perfect simulation of locally stable point processes by dominated
//! coupling from the past.
//!
//! The engine in [`cftp`] works with any target density that factorizes
//! into monotone interaction terms. Each birth in the dominating process is
//! then accepted into the upper and lower processes using two ratio
//! evaluations per factor, whatever the gap between the two processes.
//!
//! Two applications are built on top of it:
//!
//! * [`spatial`]: standard and multiscale area-interaction processes in a
//!   planar window, with [`stats`] providing K, L and T summary functions and
//!   simulation envelopes;
//! * [`wavelet`]: Bayesian wavelet shrinkage where the set of "active"
//!   coefficients follows an area-interaction prior on the lattice of wavelet
//!   indices, sampled exactly from its posterior.

pub mod cftp;
pub mod error;
pub mod rng;
pub mod spatial;
pub mod stats;
pub mod wavelet;

pub use error::{Error, Result};
