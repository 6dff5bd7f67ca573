//! Criticality metrics for road-traffic scenes and scenarios.
//!
//! The crate is `no_std` (with `alloc`) and purely computational. It covers:
//!
//! * domain types for actors, scenes and scenarios ([`types`], [`geometry`]),
//! * motion prediction models behind a common trajectory interface ([`models`]),
//! * scene-level metrics such as TTC, TTM, required accelerations or TCI ([`scene`]),
//! * scenario-level metrics and aggregation over time and actors ([`scenario`]),
//! * sampling and distribution based collision probabilities ([`probabilistic`]),
//! * the metric suitability analysis over a property knowledge base ([`suitability`]).
//!
//! File formats, the CLI and batch processing live in the `criticality-cli` crate.

#![no_std]
#![warn(missing_debug_implementations)]
// `!(x > 0.0)` style checks are meant to reject NaN as well
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod contact;
pub mod error;
pub mod geometry;
pub mod metric_id;
pub mod models;
pub mod probabilistic;
pub mod rng;
pub mod scenario;
pub mod scene;
pub mod search;
pub mod stats;
pub mod suitability;
pub mod types;

pub use contact::{ContactConfig, DistanceMode};
pub use error::{Error, Result};
pub use geometry::Vec2;
pub use metric_id::MetricId;
pub use models::{MotionModel, Predictor, Trajectory, TrajectoryPoint};
pub use scene::MetricContext;
pub use types::{
    ActorClass, ActorId, ActorState, CapabilityEnvelope, ConflictArea, Flag, Flagged,
    MetricResult, MetricValue, Scale, Scenario, Scene, Unit,
};
