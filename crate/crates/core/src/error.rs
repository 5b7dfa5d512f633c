use thiserror::Error;

use crate::params::ParamError;

#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Params(#[from] ParamError),

    #[error("field has {field} samples but the grid has {grid} points")]
    GridMismatch { field: usize, grid: usize },

    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("time must be non-negative, got {0}")]
    NegativeTime(f64),

    #[error("time must be non-zero")]
    ZeroTime,

    #[error("integrated strength k must be non-zero for the narrow-pointer limit")]
    ZeroK,

    #[error("t = {t} does not lie after the end of the interaction (epsilon = {epsilon})")]
    TimeBeforeInteractionEnd { t: f64, epsilon: f64 },

    #[error("pointer is not narrow: sigma_C / (sigma_Q * lambda * t) = {ratio}")]
    RegimeViolation { ratio: f64 },

    #[error("grid too coarse: {0}")]
    GridTooCoarse(String),

    #[error("density {value} at index {index} is below the floor {floor}")]
    DensityFloorViolation { index: usize, value: f64, floor: f64 },

    #[error("non-finite value in field `{0}`")]
    NonFiniteField(&'static str),

    #[error("CFL violated: dt = {dt} exceeds the limit {limit}")]
    CflViolation { dt: f64, limit: f64 },

    #[error("label {label} outside the mixture axis [{min}, {max}]")]
    LabelOutOfRange { label: f64, min: f64, max: f64 },

    #[error("weight density is zero everywhere")]
    DegenerateWeights,

    #[error("invalid measurement record: {0}")]
    InvalidRecord(String),

    #[error("invalid mixture: {0}")]
    InvalidMixture(String),

    #[error("invalid alpha profile: {0}")]
    InvalidProfile(String),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
