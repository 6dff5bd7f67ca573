//! Monte Carlo collision probability over sampled control inputs of A1.
//!
//! Each sample draws a control sequence, rolls it out with a unicycle model
//! and checks it against the predictions of the other actors, the static
//! objects and the drivable area. Samples are weighted by the combined goal
//! `Π g_j(u)^{α_j}`.

use alloc::sync::Arc;
use alloc::vec::Vec;
use core::fmt::Debug;

#[allow(unused_imports)] // float methods come from std when it is linked
use num_traits::Float;
use rand_chacha::ChaCha8Rng;

use crate::contact::{first_contact, Body, DistanceMode};
use crate::error::{Error, Result};
use crate::geometry::{OrientedRect, Vec2};
use crate::models::{Trajectory, TrajectoryPoint};
use crate::rng::{stream, unit};
use crate::scene::MetricContext;
use crate::types::{ActorId, ActorState, Scene};

/// Piecewise constant `(longitudinal acceleration, yaw rate)` controls, each
/// held for an equal share of the horizon.
#[derive(Clone, Debug, PartialEq)]
pub struct ControlSequence {
    pub controls: Vec<(f64, f64)>,
}

impl ControlSequence {
    /// Unicycle rollout from `state` over `horizon` with output step `step`.
    /// Speed is kept within `[0, v_max]`.
    pub fn rollout(&self, state: &ActorState, horizon: f64, step: f64) -> Result<Trajectory> {
        if self.controls.is_empty() {
            return Err(Error::InvalidParameter("empty control sequence".into()));
        }
        let seg = horizon / self.controls.len() as f64;
        let v_max = state.capabilities.v_max;
        let n = (horizon / step - 1e-9).ceil().max(1.0) as usize;
        let h = horizon / n as f64;
        let (mut pos, mut yaw, mut v) = (state.position, state.yaw, state.speed().min(v_max));
        let mut pts = Vec::with_capacity(n + 1);
        pts.push(TrajectoryPoint { t: 0.0, position: pos, heading: yaw, velocity: Vec2::from_angle(yaw) * v });
        for k in 0..n {
            let t = k as f64 * h;
            let i = ((t + 0.5 * h) / seg) as usize;
            let (a, w) = self.controls[i.min(self.controls.len() - 1)];
            let v1 = (v + a * h).clamp(0.0, v_max);
            let yaw1 = yaw + w * h;
            pos += Vec2::from_angle(0.5 * (yaw + yaw1)) * (0.5 * (v + v1) * h);
            (yaw, v) = (yaw1, v1);
            pts.push(TrajectoryPoint { t: t + h, position: pos, heading: yaw, velocity: Vec2::from_angle(yaw) * v });
        }
        Trajectory::new(pts)
    }
}

/// Draws control sequences for A1.
pub trait ControlSampler: Debug + Send + Sync {
    fn sample(&self, rng: &mut ChaCha8Rng) -> ControlSequence;
}

/// Independent uniform controls per segment.
#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct UniformControls {
    pub segments: usize,
    pub accel: (f64, f64),
    pub yaw_rate: (f64, f64),
}

impl Default for UniformControls {
    fn default() -> Self {
        UniformControls { segments: 3, accel: (-8.0, 2.0), yaw_rate: (-0.3, 0.3) }
    }
}

impl ControlSampler for UniformControls {
    fn sample(&self, rng: &mut ChaCha8Rng) -> ControlSequence {
        let draw = |rng: &mut ChaCha8Rng, (lo, hi): (f64, f64)| lo + (hi - lo) * unit(rng);
        let controls = (0..self.segments.max(1)).map(|_| (draw(rng, self.accel), draw(rng, self.yaw_rate))).collect();
        ControlSequence { controls }
    }
}

/// One of a fixed list of control sequences, chosen with equal probability.
#[derive(Clone, Debug, PartialEq)]
pub struct DiscreteControls {
    pub choices: Vec<ControlSequence>,
}

impl ControlSampler for DiscreteControls {
    fn sample(&self, rng: &mut ChaCha8Rng) -> ControlSequence {
        let k = ((unit(rng) * self.choices.len() as f64) as usize).min(self.choices.len() - 1);
        self.choices[k].clone()
    }
}

/// Goal function `g(u) ∈ [0, 1]` rating a sampled control sequence.
pub trait GoalFunction: Debug + Send + Sync {
    fn value(&self, controls: &ControlSequence, trajectory: &Trajectory) -> f64;
}

/// Gaussian penalty on the mean squared controls.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ComfortGoal {
    pub accel_scale: f64,
    pub yaw_rate_scale: f64,
}

impl GoalFunction for ComfortGoal {
    fn value(&self, u: &ControlSequence, _: &Trajectory) -> f64 {
        let n = u.controls.len().max(1) as f64;
        let e: f64 = u
            .controls
            .iter()
            .map(|(a, w)| (a / self.accel_scale).powi(2) + (w / self.yaw_rate_scale).powi(2))
            .sum();
        (-0.5 * e / n).exp()
    }
}

#[derive(Clone, Debug)]
pub struct PmcConfig {
    pub samples: usize,
    pub seed: u64,
    /// Goal functions with their exponents; empty means equal weights.
    pub goals: Vec<(Arc<dyn GoalFunction>, f64)>,
}

impl Default for PmcConfig {
    fn default() -> Self {
        PmcConfig { samples: 1000, seed: 0, goals: Vec::new() }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PmcEstimate {
    pub probability: f64,
    pub standard_error: f64,
    pub samples: usize,
}

/// A1's scene with the other actors' predictions prepared once.
#[derive(Debug)]
pub struct PmcProblem<'a> {
    ctx: &'a MetricContext,
    scene: &'a Scene,
    ego: &'a ActorState,
    others: Vec<(&'a ActorState, Trajectory)>,
}

impl<'a> PmcProblem<'a> {
    pub fn new(ctx: &'a MetricContext, scene: &'a Scene, a1: ActorId) -> Result<Self> {
        let ego = scene.actor(a1)?;
        let others = scene.others(a1).map(|s| Ok((s, ctx.predict(s)?))).collect::<Result<Vec<_>>>()?;
        Ok(PmcProblem { ctx, scene, ego, others })
    }

    fn leaves_drivable_area(&self, t: &Trajectory) -> bool {
        let Some(grid) = &self.scene.drivable_area else { return false };
        t.points().iter().any(|p| match self.ctx.mode() {
            DistanceMode::Center => !grid.is_drivable(p.position),
            DistanceMode::Footprint => OrientedRect::new(p.position, p.heading, self.ego.length, self.ego.width)
                .corners()
                .iter()
                .any(|c| !grid.is_drivable(*c)),
        })
    }

    /// Whether the rollout hits an actor, a static object or leaves the drivable area.
    pub fn collides(&self, t: &Trajectory) -> bool {
        let h = self.ctx.horizon();
        let ego = Body::actor(t, self.ego, self.ctx.mode());
        self.others.iter().any(|(s, tr)| first_contact(&ego, &Body::actor(tr, s, self.ctx.mode()), 0.0, h, &self.ctx.contact).is_some())
            || self
                .scene
                .static_objects
                .iter()
                .any(|o| first_contact(&ego, &Body::Static(o), 0.0, h, &self.ctx.contact).is_some())
            || self.leaves_drivable_area(t)
    }

    /// Weight and collision outcome of sample `index`.
    pub fn outcome(&self, sampler: &dyn ControlSampler, cfg: &PmcConfig, index: u64) -> Result<(f64, bool)> {
        let mut rng = stream(cfg.seed, index);
        let u = sampler.sample(&mut rng);
        let t = u.rollout(self.ego, self.ctx.horizon(), self.ctx.predictor.step)?;
        let w = cfg.goals.iter().map(|(g, alpha)| g.value(&u, &t).clamp(0.0, 1.0).powf(*alpha)).product();
        Ok((w, self.collides(&t)))
    }
}

/// Self-normalized importance estimate from `(weight, collided)` pairs, summed in order.
pub fn pmc_estimate(outcomes: &[(f64, bool)]) -> Result<PmcEstimate> {
    let total: f64 = outcomes.iter().map(|o| o.0).sum();
    if !(total > 0.0) || !total.is_finite() {
        return Err(Error::DegenerateGoal);
    }
    let hit: f64 = outcomes.iter().filter(|o| o.1).map(|o| o.0).sum();
    let p = (hit / total).clamp(0.0, 1.0);
    let var: f64 = outcomes.iter().map(|&(w, c)| (w * (f64::from(u8::from(c)) - p)).powi(2)).sum();
    Ok(PmcEstimate { probability: p, standard_error: var.sqrt() / total, samples: outcomes.len() })
}

/// Sequential P-MC estimate over `cfg.samples` samples.
pub fn p_mc(ctx: &MetricContext, scene: &Scene, a1: ActorId, sampler: &dyn ControlSampler, cfg: &PmcConfig) -> Result<PmcEstimate> {
    if cfg.samples == 0 {
        return Err(Error::InvalidParameter("at least one sample is required".into()));
    }
    let problem = PmcProblem::new(ctx, scene, a1)?;
    let outcomes = (0..cfg.samples as u64).map(|i| problem.outcome(sampler, cfg, i)).collect::<Result<Vec<_>>>()?;
    pmc_estimate(&outcomes)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::Predictor;
    use alloc::vec;

    fn ctx() -> MetricContext {
        MetricContext::new(Predictor::new(crate::models::MotionModel::ConstantVelocity, 3.0, 0.05).unwrap(), Default::default())
    }

    /// A1 at 10 m/s with a parked car 20 m ahead in its lane.
    fn scene() -> Scene {
        Scene::new(
            0.0,
            vec![
                ActorState::new(1, 0.0, Vec2::ZERO, Vec2::new(10.0, 0.0)),
                ActorState::new(2, 0.0, Vec2::new(20.0, 0.0), Vec2::ZERO),
            ],
        )
        .unwrap()
    }

    fn choices() -> DiscreteControls {
        DiscreteControls {
            choices: vec![
                ControlSequence { controls: vec![(0.0, 0.0)] },
                ControlSequence { controls: vec![(-8.0, 0.0)] },
            ],
        }
    }

    #[test]
    fn rollout_straight_and_braking() {
        let s = &scene().actors[0];
        let t = ControlSequence { controls: vec![(0.0, 0.0)] }.rollout(s, 3.0, 0.05).unwrap();
        assert!((t.last().position.x - 30.0).abs() < 1e-9);
        let b = ControlSequence { controls: vec![(-8.0, 0.0)] }.rollout(s, 3.0, 0.05).unwrap();
        assert!((b.last().position.x - 6.25).abs() < 1e-2, "{:?}", b.last());
    }

    #[test]
    fn two_choices_give_half() {
        let cfg = PmcConfig { samples: 2000, seed: 3, goals: vec![] };
        let e = p_mc(&ctx(), &scene(), ActorId(1), &choices(), &cfg).unwrap();
        assert!((e.probability - 0.5).abs() < 3.0 * e.standard_error, "{e:?}");
        assert_eq!(e, p_mc(&ctx(), &scene(), ActorId(1), &choices(), &cfg).unwrap());
    }

    #[test]
    fn all_or_nothing() {
        let cfg = PmcConfig { samples: 50, ..Default::default() };
        let go = DiscreteControls { choices: vec![ControlSequence { controls: vec![(0.0, 0.0)] }] };
        assert_eq!(p_mc(&ctx(), &scene(), ActorId(1), &go, &cfg).unwrap().probability, 1.0);
        let stop = DiscreteControls { choices: vec![ControlSequence { controls: vec![(-8.0, 0.0)] }] };
        assert_eq!(p_mc(&ctx(), &scene(), ActorId(1), &stop, &cfg).unwrap().probability, 0.0);
    }

    #[test]
    fn zero_weights_are_degenerate() {
        assert_eq!(pmc_estimate(&[(0.0, true), (0.0, false)]), Err(Error::DegenerateGoal));
    }
}
