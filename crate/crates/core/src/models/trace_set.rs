//! Over-approximating trace sets spanned by the capability envelope.

use alloc::vec::Vec;

use crate::error::Result;
use crate::geometry::compose;
use crate::models::trajectory::{Trajectory, TrajectorySet};
use crate::models::{MotionModel, Predictor};
use crate::types::ActorState;

/// Constant-acceleration traces on a `long_levels × lat_levels` grid over
/// `[a_long_min, a_long_max] × [−a_lat_max, a_lat_max]`, plus the nominal trace.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TraceSetModel {
    pub long_levels: usize,
    pub lat_levels: usize,
}

impl Default for TraceSetModel {
    fn default() -> Self {
        TraceSetModel { long_levels: 3, lat_levels: 3 }
    }
}

fn levels(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => alloc::vec![0.5 * (lo + hi)],
        _ => (0..n).map(|k| lo + (hi - lo) * k as f64 / (n - 1) as f64).collect(),
    }
}

impl TraceSetModel {
    pub fn generate(&self, state: &ActorState, predictor: &Predictor) -> Result<TrajectorySet> {
        let caps = &state.capabilities;
        let mut traces = alloc::vec![predictor.predict(state)?];
        let ca = Predictor { model: MotionModel::ConstantAcceleration, ..predictor.clone() };
        for along in levels(caps.a_long_min, caps.a_long_max, self.long_levels) {
            for alat in levels(-caps.a_lat_max, caps.a_lat_max, self.lat_levels) {
                let s = state.clone().with_acceleration(compose(along, alat, state.yaw));
                traces.push(ca.predict(&s)?);
            }
        }
        Ok(TrajectorySet::unweighted(traces))
    }
}

/// Wraps a single trajectory as a one-member set.
pub fn singleton(t: Trajectory) -> TrajectorySet {
    TrajectorySet::unweighted(alloc::vec![t])
}
