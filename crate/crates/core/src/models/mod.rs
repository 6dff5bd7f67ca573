//! Motion prediction models behind one trajectory-producing interface.
//!
//! Dynamic motion models (`MotionModel`) continue the current state of an
//! actor; maneuver models ([`maneuver`]) condition the prediction on a
//! specific action; [`trace_set`] builds over-approximating sets of traces and
//! [`markov`] the stochastic abstraction used for reachable-set probabilities.

pub mod car;
pub mod kinematics;
pub mod maneuver;
pub mod markov;
pub mod one_track;
pub mod potential;
pub mod trace_set;
pub mod trajectory;
pub mod turn;

#[allow(unused_imports)] // float methods come from std when it is linked
use num_traits::Float;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::geometry::Vec2;
use crate::types::ActorState;

pub use maneuver::{ManeuverGenerator, ManeuverModel};
pub use one_track::OneTrackParams;
pub use trace_set::TraceSetModel;
pub use trajectory::{Trajectory, TrajectoryPoint, TrajectorySet};

use kinematics::{constant_acceleration, follow_heading, stop_time, taylor_predict};
use turn::{augmented_ct_polar_step, coordinated_turn_step, PolarTurnState};

/// Dynamic motion model producing a single trace.
#[derive(Clone, Debug, PartialEq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(tag = "kind", rename_all = "snake_case"))]
pub enum MotionModel {
    #[default]
    ConstantVelocity,
    /// Constant acceleration vector; motion freezes once the actor stops.
    ConstantAcceleration,
    Taylor { order: u32, #[cfg_attr(feature = "serde", serde(default))] zero_fill: bool },
    /// Constant speed and constant yaw rate.
    CoordinatedTurn,
    AugmentedCoordinatedTurn,
    /// Constant speed and steering angle; the steering angle is taken from the
    /// state or derived from its yaw rate.
    SimpleCar { wheelbase: f64 },
    ContinuousSteering { wheelbase: f64, steering_rate: f64 },
    OneTrack(OneTrackParams),
}

/// A motion model with horizon `t_H` and sampling step `T`.
#[derive(Clone, Debug, PartialEq)]
pub struct Predictor {
    pub model: MotionModel,
    pub horizon: f64,
    pub step: f64,
    /// Step of numerical integration for ODE based models.
    pub integration_step: f64,
}

impl Default for Predictor {
    fn default() -> Self {
        Predictor { model: MotionModel::ConstantVelocity, horizon: 20.0, step: 0.01, integration_step: 0.01 }
    }
}

impl Predictor {
    pub fn new(model: MotionModel, horizon: f64, step: f64) -> Result<Self> {
        let p = Predictor { model, horizon, step, integration_step: 0.01 };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.horizon > 0.0 && self.step > 0.0 && self.step <= self.horizon && self.integration_step > 0.0)
            || !self.horizon.is_finite()
        {
            return Err(Error::InvalidParameter("prediction horizon and step".into()));
        }
        Ok(())
    }

    /// Sample offsets `0, T, 2T, …, t_H`.
    pub fn sample_times(&self) -> Vec<f64> {
        sample_times(self.horizon, self.step)
    }

    pub fn predict(&self, s: &ActorState) -> Result<Trajectory> {
        self.validate()?;
        let pt = |t, position, heading, velocity| TrajectoryPoint { t, position, heading, velocity };
        let points: Vec<TrajectoryPoint> = match &self.model {
            MotionModel::ConstantVelocity => [0.0, self.horizon]
                .iter()
                .map(|&t| pt(t, s.position + s.velocity * t, s.yaw, s.velocity))
                .collect(),
            MotionModel::ConstantAcceleration => {
                let mut times = self.sample_times();
                if let Some(ts) = stop_time(s.velocity, s.acceleration) {
                    insert_time(&mut times, ts);
                }
                times
                    .into_iter()
                    .map(|t| {
                        let (p, v) = constant_acceleration(s.position, s.velocity, s.acceleration, t);
                        pt(t, p, follow_heading(s.yaw, s.velocity, v), v)
                    })
                    .collect()
            }
            MotionModel::Taylor { order, zero_fill } => self
                .sample_times()
                .into_iter()
                .map(|t| {
                    let n = taylor_predict(s, *order, t, *zero_fill)?;
                    Ok(pt(t, n.position, n.yaw, n.velocity))
                })
                .collect::<Result<_>>()?,
            MotionModel::CoordinatedTurn => self
                .sample_times()
                .into_iter()
                .map(|t| {
                    let (p, v) = coordinated_turn_step(s.position, s.velocity, s.yaw_rate, t);
                    pt(t, p, s.yaw + s.yaw_rate * t, v)
                })
                .collect(),
            MotionModel::AugmentedCoordinatedTurn => {
                let start = PolarTurnState { position: s.position, v_long: s.v_long(), phi: s.yaw, omega: s.yaw_rate };
                self.sample_times()
                    .into_iter()
                    .map(|t| {
                        let n = augmented_ct_polar_step(start, t);
                        pt(t, n.position, n.phi, Vec2::from_angle(n.phi) * n.v_long)
                    })
                    .collect()
            }
            MotionModel::SimpleCar { wheelbase } => {
                let v = s.v_long();
                let phi = steering_of(s, *wheelbase);
                return car::simple_car_integrate(
                    s.position,
                    s.yaw,
                    |_| v,
                    |_| phi,
                    self.horizon,
                    *wheelbase,
                    self.integration_step,
                );
            }
            MotionModel::ContinuousSteering { wheelbase, steering_rate } => {
                let v = s.v_long();
                let rate = *steering_rate;
                return car::continuous_steering_integrate(
                    s.position,
                    s.yaw,
                    steering_of(s, *wheelbase),
                    |_| v,
                    |_| rate,
                    self.horizon,
                    *wheelbase,
                    self.integration_step,
                );
            }
            MotionModel::OneTrack(params) => one_track_trajectory(s, params, self.horizon, self.integration_step)?,
        };
        Trajectory::new(points)
    }
}

fn steering_of(s: &ActorState, wheelbase: f64) -> f64 {
    s.steering_angle.unwrap_or_else(|| {
        let v = s.v_long();
        if v.abs() > 1e-9 {
            (s.yaw_rate * wheelbase / v).atan()
        } else {
            0.0
        }
    })
}

fn one_track_trajectory(s: &ActorState, params: &OneTrackParams, horizon: f64, h: f64) -> Result<Vec<TrajectoryPoint>> {
    let v = s.speed();
    let delta = s.steering_angle.unwrap_or(0.0);
    let mut beta = s.sideslip.unwrap_or(0.0);
    let mut omega = s.yaw_rate;
    let mut psi = s.yaw;
    let mut p = s.position;
    let vel = |psi: f64, beta: f64| Vec2::from_angle(psi + beta) * v;
    let mut out = alloc::vec![TrajectoryPoint { t: 0.0, position: p, heading: psi, velocity: vel(psi, beta) }];
    let times = sample_times(horizon, h);
    for w in times.windows(2) {
        let dt = w[1] - w[0];
        let (b1, w1) = one_track::one_track_step(beta, omega, v, params, delta, dt)?;
        let psi1 = psi + 0.5 * (omega + w1) * dt;
        p += (vel(psi, beta) + vel(psi1, b1)) * (0.5 * dt);
        beta = b1;
        omega = w1;
        psi = psi1;
        out.push(TrajectoryPoint { t: w[1], position: p, heading: psi, velocity: vel(psi, beta) });
    }
    Ok(out)
}

/// `0, step, 2·step, …` up to and including `horizon`.
pub fn sample_times(horizon: f64, step: f64) -> Vec<f64> {
    let n = (horizon / step - 1e-9).ceil().max(0.0) as usize;
    let mut out: Vec<f64> = (0..n).map(|k| k as f64 * step).collect();
    out.push(horizon);
    out
}

fn insert_time(times: &mut Vec<f64>, t: f64) {
    if t > 0.0 && t < times[times.len() - 1] {
        let i = times.partition_point(|x| *x < t);
        if (times[i] - t).abs() > 1e-12 && (i == 0 || (times[i - 1] - t).abs() > 1e-12) {
            times.insert(i, t);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn actor() -> ActorState {
        ActorState::new(1, 0.0, Vec2::new(1.0, 2.0), Vec2::new(10.0, 0.0))
            .with_acceleration(Vec2::new(-2.0, 0.0))
            .with_yaw_rate(0.1)
    }

    #[test]
    fn every_model_starts_at_the_input_state() {
        let models = [
            MotionModel::ConstantVelocity,
            MotionModel::ConstantAcceleration,
            MotionModel::Taylor { order: 2, zero_fill: false },
            MotionModel::CoordinatedTurn,
            MotionModel::AugmentedCoordinatedTurn,
            MotionModel::SimpleCar { wheelbase: 2.7 },
            MotionModel::ContinuousSteering { wheelbase: 2.7, steering_rate: 0.05 },
            MotionModel::OneTrack(OneTrackParams::default()),
        ];
        for m in models {
            let tr = Predictor::new(m.clone(), 5.0, 0.1).unwrap().predict(&actor()).unwrap();
            assert_eq!(tr.at(0.0).position, Vec2::new(1.0, 2.0), "{m:?}");
            assert!((tr.end_time() - 5.0).abs() < 1e-12);
        }
    }

    #[test]
    fn constant_acceleration_stops() {
        let tr = Predictor::new(MotionModel::ConstantAcceleration, 10.0, 0.1).unwrap().predict(&actor()).unwrap();
        assert!((tr.at(10.0).position.x - 26.0).abs() < 1e-9);
        assert!((tr.at(5.0).position.x - 26.0).abs() < 1e-9);
    }

    #[test]
    fn simple_car_uses_yaw_rate() {
        let tr = Predictor::new(MotionModel::SimpleCar { wheelbase: 2.7 }, 2.0, 0.1).unwrap().predict(&actor()).unwrap();
        assert!((tr.last().heading - 0.2).abs() < 1e-9);
    }

    #[test]
    fn invalid_horizon() {
        assert!(Predictor::new(MotionModel::ConstantVelocity, 1.0, 2.0).is_err());
        assert!(Predictor::new(MotionModel::ConstantVelocity, 0.0, 0.0).is_err());
    }

    #[test]
    fn sample_times_end_at_horizon() {
        let t = sample_times(1.0, 0.3);
        assert_eq!(t.len(), 5);
        assert_eq!(*t.last().unwrap(), 1.0);
    }
}
