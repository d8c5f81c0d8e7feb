use thiserror::Error;

pub type Result<T> = std::result::Result<T, PtaError>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum PtaError {
    #[error("non-finite value for `{0}`")]
    NonFinite(&'static str),

    #[error("time {t} s is outside the window [{start}, {end}] s")]
    OutsideWindow { t: f64, start: f64, end: f64 },

    #[error("parameter u = {0} is outside [0, 1]")]
    ParameterOutOfRange(f64),

    #[error("target unreachable: off by {deficit:.6} cm")]
    Unreachable { deficit: f64 },

    #[error("target unreachable at t = {t:.4} s: off by {deficit:.6} cm")]
    UnreachableAt { t: f64, deficit: f64 },

    #[error("invalid gait: {0}")]
    InvalidGait(String),

    #[error("invalid robot parameters: {0}")]
    InvalidRobot(String),

    #[error("singular ZMP: vertical force sum {0} is too close to zero")]
    SingularZmp(f64),

    #[error("need at least 3 uniformly spaced samples, got {0}")]
    TooFewSamples(usize),

    #[error("swing foot never touches the terrain during the step")]
    NoTouchdown,

    #[error("impact at the first sample has no pre-impact history")]
    NoPreImpactHistory,

    #[error("invalid impact model: {0}")]
    InvalidImpact(String),

    #[error("invalid terrain: {0}")]
    InvalidTerrain(String),
}
