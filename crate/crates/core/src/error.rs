use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid mission `{id}`: {reason}")]
    InvalidMission { id: String, reason: String },

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("relative velocity is zero; closest approach time is undefined")]
    DegenerateRelativeVelocity,

    #[error("missions `{first}` and `{second}` conflict for every departure delay")]
    UnresolvablePair { first: String, second: String },

    #[error("no conflict-free departure for `{agent}` within the horizon")]
    EmptyFeasibleSet { agent: String },

    #[error("{n} agents exceeds the enumeration cap of {cap}")]
    TooManyAgents { n: usize, cap: usize },

    #[error("duplicate mission id `{0}`")]
    DuplicateId(String),

    #[error("unknown mission id `{0}`")]
    UnknownId(String),

    #[error("no mutually intersecting topology found after {attempts} attempts")]
    TopologyRejectionExhausted { attempts: usize },

    #[error("all samples are equal")]
    DegenerateSamples,

    #[error("need at least {needed} samples, got {got}")]
    InsufficientSamples { needed: usize, got: usize },

    #[error("sample {value} is outside the support of the {family} family")]
    DomainError { family: &'static str, value: f64 },

    #[error("{0} did not converge")]
    NonConvergence(&'static str),

    #[error("point is {distance_m:.0} m from the projection reference (limit {limit_m:.0} m)")]
    OutOfProjectionRange { distance_m: f64, limit_m: f64 },

    #[error("invalid coordinate: {0}")]
    InvalidCoordinate(String),

    #[error("scenario: {0}")]
    Scenario(String),
}

impl Error {
    /// True for errors that mean the instance has no delay-only resolution.
    pub fn is_infeasible(&self) -> bool {
        matches!(
            self,
            Error::EmptyFeasibleSet { .. } | Error::UnresolvablePair { .. }
        )
    }
}
