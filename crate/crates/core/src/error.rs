use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// A partial sum or Fejér mean asked for frequencies a grid cannot resolve.
    #[error("aliasing: frequency {n} is not resolved by a grid of {grid} points")]
    Aliasing { n: u64, grid: usize },

    #[error("grid of {got} points is too coarse, at least {required} required")]
    GridTooCoarse { required: usize, got: usize },

    #[error("spectral overflow: spectrum width {width} does not fit a grid of {grid} points")]
    SpectralOverflow { width: u64, grid: usize },

    #[error("hypothesis violated: {0}")]
    Hypothesis(String),

    #[error("input is identically zero")]
    ZeroInput,

    #[error("negative-frequency energy {0:e} exceeds the analyticity tolerance")]
    NotBandLimited(f64),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidParameter(msg.into())
}
