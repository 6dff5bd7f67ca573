//! Scene-level metrics: one value per scene, actor (pair) and prediction model.

pub mod accel;
pub mod maneuver;
pub mod misc;
pub mod tci;
pub mod temporal;

pub use accel::{a_lat_req, a_long_req, a_req, a_req_cond, brake_threat_number, btn, dst, steer_threat_number, stn};
pub use maneuver::{ttm, ttr};
pub use misc::{ags, pf_eval, rss_ds, sp, GapAcceptance, SafeDistance, SafetyProcedure};
pub use tci::{tci, TciParams};
pub use temporal::{dce_ttce, hw, jerk, msd, pret, psd, pttc, spret, ta, thw, tto, ttc, wttc, Target};

use crate::contact::{Body, ContactConfig, DistanceMode};
use crate::error::Result;
use crate::geometry::{polygon_distance, signed_distance_point_polygon, Vec2};
use crate::models::{Predictor, Trajectory};
use crate::search::SearchConfig;
use crate::types::ActorState;

/// Prediction model, contact semantics and search settings shared by the metrics.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct MetricContext {
    pub predictor: Predictor,
    pub contact: ContactConfig,
    pub search: SearchConfig,
}

impl MetricContext {
    pub fn new(predictor: Predictor, contact: ContactConfig) -> Self {
        MetricContext { predictor, contact, search: SearchConfig::default() }
    }

    pub fn horizon(&self) -> f64 {
        self.predictor.horizon
    }

    pub fn mode(&self) -> DistanceMode {
        self.contact.mode
    }

    pub fn predict(&self, s: &ActorState) -> Result<Trajectory> {
        self.predictor.predict(s)
    }

    pub fn with_predictor(&self, predictor: Predictor) -> Self {
        MetricContext { predictor, ..self.clone() }
    }

    /// First contact time of two predicted actors, `+inf` when none within the horizon.
    pub fn contact_time(&self, s1: &ActorState, t1: &Trajectory, s2: &ActorState, t2: &Trajectory) -> f64 {
        let b1 = Body::actor(t1, s1, self.mode());
        let b2 = Body::actor(t2, s2, self.mode());
        crate::contact::first_contact(&b1, &b2, 0.0, self.horizon(), &self.contact).unwrap_or(f64::INFINITY)
    }

    pub fn collides(&self, s1: &ActorState, t1: &Trajectory, s2: &ActorState, t2: &Trajectory) -> bool {
        self.contact_time(s1, t1, s2, t2).is_finite()
    }
}

/// Distance of two positions, or of two actor footprints when `footprints` is given.
pub fn distance(p1: Vec2, p2: Vec2, footprints: Option<(&ActorState, &ActorState)>) -> f64 {
    match footprints {
        None => p1.distance(p2),
        Some((a, b)) => {
            let fa = crate::geometry::OrientedRect::new(p1, a.yaw, a.length, a.width).polygon();
            let fb = crate::geometry::OrientedRect::new(p2, b.yaw, b.length, b.width).polygon();
            polygon_distance(&fa, &fb)
        }
    }
}

/// Current distance between two actors in the given mode.
pub fn actor_distance(a: &ActorState, b: &ActorState, mode: DistanceMode) -> f64 {
    match mode {
        DistanceMode::Center => distance(a.position, b.position, None),
        DistanceMode::Footprint => distance(a.position, b.position, Some((a, b))),
    }
}

/// Current distance between an actor and a polygon, zero inside.
pub fn actor_polygon_distance(a: &ActorState, polygon: &[Vec2], mode: DistanceMode) -> f64 {
    match mode {
        DistanceMode::Center => signed_distance_point_polygon(a.position, polygon).max(0.0),
        DistanceMode::Footprint => polygon_distance(&a.footprint().polygon(), polygon),
    }
}
