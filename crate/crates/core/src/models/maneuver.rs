//! Maneuver models: the nominal prediction until a start offset, then a
//! specific evasive or accelerating action.

use alloc::sync::Arc;
use alloc::vec::Vec;
use core::fmt::Debug;

use crate::error::{Error, Result};
use crate::geometry::Vec2;
use crate::models::kinematics::brake_1d;
use crate::models::trajectory::{Trajectory, TrajectoryPoint};
use crate::models::{sample_times, Predictor};
use crate::types::ActorState;

/// User-supplied maneuver.
pub trait ManeuverGenerator: Debug + Send + Sync {
    /// Trajectory over `[0, predictor.horizon]` with the maneuver starting at offset `start`.
    fn generate(&self, state: &ActorState, start: f64, predictor: &Predictor) -> Result<Trajectory>;
}

/// Magnitudes default to the actor's capability envelope and are capped by it.
#[derive(Clone, Debug)]
pub enum ManeuverModel {
    /// Brake along the direction of travel to a full stop.
    Brake { deceleration: Option<f64> },
    SteerLeft { lateral_acceleration: Option<f64> },
    SteerRight { lateral_acceleration: Option<f64> },
    /// Full acceleration, capped at the maximum speed.
    Kickdown { acceleration: Option<f64> },
    Custom(Arc<dyn ManeuverGenerator>),
}

impl ManeuverModel {
    pub fn brake() -> Self {
        ManeuverModel::Brake { deceleration: None }
    }

    pub fn name(&self) -> &'static str {
        match self {
            ManeuverModel::Brake { .. } => "brake",
            ManeuverModel::SteerLeft { .. } => "steer_left",
            ManeuverModel::SteerRight { .. } => "steer_right",
            ManeuverModel::Kickdown { .. } => "kickdown",
            ManeuverModel::Custom(_) => "custom",
        }
    }

    pub fn generate(&self, state: &ActorState, start: f64, predictor: &Predictor) -> Result<Trajectory> {
        if let ManeuverModel::Custom(g) = self {
            return g.generate(state, start, predictor);
        }
        let nominal = predictor.predict(state)?;
        let horizon = predictor.horizon;
        let start = start.clamp(0.0, horizon);
        let caps = &state.capabilities;
        let from = nominal.at(start);
        let dir = from.velocity.normalized().unwrap_or_else(|| Vec2::from_angle(from.heading));
        let speed = from.velocity.norm();

        let mut pts: Vec<TrajectoryPoint> = nominal.points().iter().filter(|p| p.t < start).copied().collect();
        let mut times: Vec<f64> = sample_times(horizon - start, predictor.step).into_iter().map(|t| t + start).collect();
        if horizon - start <= 0.0 {
            times = alloc::vec![start];
        }

        match self {
            ManeuverModel::Brake { deceleration } => {
                let a = -deceleration.map_or(-caps.a_long_min, f64::abs).min(-caps.a_long_min);
                if a < 0.0 && speed > 0.0 {
                    let ts = start + speed / -a;
                    if ts < horizon && !times.iter().any(|t| (t - ts).abs() < 1e-12) {
                        let i = times.partition_point(|t| *t < ts);
                        times.insert(i, ts);
                    }
                }
                for t in times {
                    let (d, v) = brake_1d(speed, a, t - start);
                    pts.push(TrajectoryPoint { t, position: from.position + dir * d, heading: from.heading, velocity: dir * v });
                }
            }
            ManeuverModel::SteerLeft { lateral_acceleration } | ManeuverModel::SteerRight { lateral_acceleration } => {
                let mag = lateral_acceleration.map_or(caps.a_lat_max, f64::abs).min(caps.a_lat_max);
                let sign = if matches!(self, ManeuverModel::SteerLeft { .. }) { 1.0 } else { -1.0 };
                let normal = Vec2::from_angle(from.heading).perp() * sign;
                for t in times {
                    let tau = t - start;
                    let base = nominal.at(t);
                    pts.push(TrajectoryPoint {
                        t,
                        position: base.position + normal * (0.5 * mag * tau * tau),
                        heading: base.heading,
                        velocity: base.velocity + normal * (mag * tau),
                    });
                }
            }
            ManeuverModel::Kickdown { acceleration } => {
                let a = acceleration.map_or(caps.a_long_max, f64::abs).min(caps.a_long_max);
                let v_max = caps.v_max.max(speed);
                let t_cap = if a > 0.0 { (v_max - speed) / a } else { f64::INFINITY };
                for t in times {
                    let tau = t - start;
                    let (d, v) = if tau <= t_cap {
                        (speed * tau + 0.5 * a * tau * tau, speed + a * tau)
                    } else {
                        (speed * t_cap + 0.5 * a * t_cap * t_cap + v_max * (tau - t_cap), v_max)
                    };
                    pts.push(TrajectoryPoint { t, position: from.position + dir * d, heading: from.heading, velocity: dir * v });
                }
            }
            ManeuverModel::Custom(_) => return Err(Error::EmptyManeuverSet),
        }
        Trajectory::new(pts)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::MotionModel;

    fn predictor() -> Predictor {
        Predictor::new(MotionModel::ConstantVelocity, 10.0, 0.05).unwrap()
    }

    #[test]
    fn brake_stops_after_stopping_distance() {
        let s = ActorState::new(1, 0.0, Vec2::ZERO, Vec2::new(20.0, 0.0));
        let tr = ManeuverModel::brake().generate(&s, 1.0, &predictor()).unwrap();
        assert!((tr.at(10.0).position.x - 45.0).abs() < 1e-9);
        assert!((tr.at(1.0).position.x - 20.0).abs() < 1e-9);
        let speeds: Vec<f64> = tr.points().iter().map(|p| p.velocity.norm()).collect();
        assert!(speeds.windows(2).all(|w| w[1] <= w[0] + 1e-12));
    }

    #[test]
    fn steer_left_offsets_to_the_left() {
        let s = ActorState::new(1, 0.0, Vec2::ZERO, Vec2::new(10.0, 0.0));
        let tr = ManeuverModel::SteerLeft { lateral_acceleration: Some(2.0) }.generate(&s, 0.0, &predictor()).unwrap();
        let p = tr.at(2.0).position;
        assert!((p.y - 4.0).abs() < 1e-9 && (p.x - 20.0).abs() < 1e-9);
    }

    #[test]
    fn kickdown_is_capped() {
        let mut s = ActorState::new(1, 0.0, Vec2::ZERO, Vec2::new(10.0, 0.0));
        s.capabilities.v_max = 13.0;
        let tr = ManeuverModel::Kickdown { acceleration: None }.generate(&s, 0.0, &predictor()).unwrap();
        assert!((tr.at(10.0).velocity.x - 13.0).abs() < 1e-12);
    }
}
