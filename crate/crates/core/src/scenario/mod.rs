//! Scenario-level metrics over a time-ordered sequence of scenes.

pub mod encroachment;
pub mod exposure;
pub mod series;
pub mod severity;

pub use encroachment::{et, pet, pri, soi, InflatedFootprint, PersonalSpace};
pub use exposure::{tet, tit, tta, EvasiveDetector, ThresholdDetector};
pub use series::{aggregate_actors, aggregate_scene, aggregate_time, ActorAggregate, Aggregate, TimeSeries};
pub use severity::{am, ci, cpi, cs, delta_v, delta_v_event, delta_v_mass, joksch_fatality};
