use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    /// Model parameters outside their admissible range.
    #[error("invalid model: {0}")]
    InvalidModel(String),

    /// Malformed user input (signal lengths, grids, files).
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("insufficient data: need at least {needed} points, got {got}")]
    InsufficientData { needed: usize, got: usize },

    /// The upper and lower processes were still apart after the last
    /// allowed doubling of the horizon.
    #[error(
        "no coalescence after {doublings} doublings (horizon {horizon}): \
         upper has {upper} points, lower has {lower}"
    )]
    NonCoalescence {
        doublings: u32,
        horizon: f64,
        upper: usize,
        lower: usize,
    },

    /// A factor model broke one of its declared contracts (bound or
    /// monotonicity) during a run.
    #[error("internal invariant violated: {0}")]
    Invariant(String),
}
