use alloc::string::String;

use crate::types::ActorId;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("invalid actor state: {0}")]
    InvalidState(String),
    #[error("invalid scene: {0}")]
    InvalidScene(String),
    #[error("invalid scenario: {0}")]
    InvalidScenario(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("actor {0} is not present in the scene")]
    MissingActor(ActorId),
    #[error("unknown conflict area {0}")]
    UnknownConflictArea(u32),
    #[error("insufficient derivatives for a Taylor prediction of order {order}")]
    InsufficientDerivatives { order: u32 },
    #[error("non-finite model input")]
    NonFinite,
    #[error("one-track model undefined at standstill")]
    Standstill,
    #[error("degenerate partition: {0}")]
    DegeneratePartition(String),
    #[error("potential descent diverged after {halvings} step halvings")]
    Diverged { halvings: u32 },
    #[error("empty trajectory set")]
    EmptyTrajectorySet,
    #[error("empty maneuver set")]
    EmptyManeuverSet,
    #[error("invalid gap-acceptance model: acceptance is not monotone in the gap size")]
    InvalidGapModel,
    #[error("invalid capability envelope")]
    InvalidCapability,
    #[error("jerk unavailable for actor {0}")]
    MissingJerk(ActorId),
    #[error("safety procedure does not bring the actor to a stop")]
    NonStopping,
    #[error("empty series")]
    EmptySeries,
    #[error("at least two actors are required")]
    TooFewActors,
    #[error("no evasive event")]
    NoEvasiveEvent,
    #[error("no encroachment")]
    NoEncroachment,
    #[error("incoherent conflict period")]
    IncoherentConflictPeriod,
    #[error("missing mass for actor {0}")]
    MissingMass(ActorId),
    #[error("missing speed information in collision event")]
    MissingSpeeds,
    #[error("degenerate goal function: all sample weights are zero")]
    DegenerateGoal,
    #[error("probabilities are not normalized (sum = {0})")]
    NotNormalized(f64),
    #[error("transition matrix is not stochastic: {0}")]
    NotStochastic(String),
    #[error("scenario has zero duration")]
    ZeroDuration,
    #[error("unknown metric id `{0}`")]
    UnknownMetric(String),
    #[error("duplicate id `{0}`")]
    DuplicateId(String),
    #[error("missing field `{0}`")]
    MissingField(String),
    #[error("requirement order is cyclic")]
    CyclicOrder,
    #[error("unknown requirement `{0}`")]
    UnknownRequirement(String),
}
