use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("radius {r} is outside the catenoid domain r >= 1")]
    Domain { r: f64 },

    #[error("spatial part of the gradient vector vanishes; direction is degenerate")]
    DegenerateDirection,

    #[error("hyperbolicity lost at index {index} (position {position}): slack {slack} < margin {margin}")]
    NonHyperbolic {
        index: usize,
        position: f64,
        slack: f64,
        margin: f64,
    },

    #[error("gradient is not timelike: |X0_hat| = {0} >= 1")]
    NotTimelike(f64),

    #[error("time step {dt} exceeds the CFL limit {limit}")]
    Cfl { dt: f64, limit: f64 },

    #[error("non-finite value produced at t = {t}")]
    NonFinite { t: f64 },

    #[error("grid does not cover the required interval: {0}")]
    GridTooSmall(String),

    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("derivative order {requested} exceeds the stencil maximum {max}")]
    StencilOrder { requested: usize, max: usize },

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("shape mismatch: {0}")]
    Shape(String),

    #[error("configuration error: {0}")]
    Config(String),

    #[error("checkpoint format error: {0}")]
    Checkpoint(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
