use thiserror::Error;

/// Crate-wide error type.
#[derive(Debug, Error)]
pub enum Error {
    #[error("probability must lie in (0, 1], got {0}")]
    InvalidProbability(f64),

    #[error("variance must be nonnegative, got {0}")]
    InvalidVariance(f64),

    #[error("index {index} out of range for horizon {horizon}")]
    OutOfRange { index: usize, horizon: usize },

    #[error("time {0} not covered by any stopping time (empty supremum)")]
    EmptySupremum(u64),

    #[error("need at least {need} samples, got {got}")]
    TooFewSamples { need: usize, got: usize },

    #[error("{0}")]
    InvalidInput(String),

    #[error("quadrature did not converge: last refinement changed the value by {last_change:e}")]
    QuadratureDiverged { last_change: f64 },

    #[error("coupling identity violated at n={n}: walk at ({walk_x},{walk_y}), embedding at ({embed_x},{embed_y})")]
    CouplingViolation {
        n: usize,
        walk_x: i64,
        walk_y: i64,
        embed_x: i64,
        embed_y: i64,
    },
}

pub type Result<T> = std::result::Result<T, Error>;
