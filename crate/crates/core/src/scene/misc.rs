//! Accepted gap size, safety potential, RSS safe distance and potential fields.

#[allow(unused_imports)] // float methods come from std when it is linked
use num_traits::Float;
use core::fmt::Debug;

use crate::error::{Error, Result};
use crate::geometry::longitudinal_lateral_decompose;
use crate::models::potential::PotentialField;
use crate::scene::{temporal, MetricContext};
use crate::types::{ActorId, ActorState, Scene};

/// Decision model: does A1 act given a gap of size `gap`?
pub trait GapAcceptance: Debug {
    fn accepts(&self, scene: &Scene, actor: ActorId, gap: f64) -> bool;
}

/// Accepts every gap of at least `min_gap`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ThresholdGap {
    pub min_gap: f64,
}

impl GapAcceptance for ThresholdGap {
    fn accepts(&self, _: &Scene, _: ActorId, gap: f64) -> bool {
        gap >= self.min_gap
    }
}

/// Logistic acceptance probability thresholded at `threshold`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LogisticGap {
    pub midpoint: f64,
    pub scale: f64,
    pub threshold: f64,
}

impl GapAcceptance for LogisticGap {
    fn accepts(&self, _: &Scene, _: ActorId, gap: f64) -> bool {
        let p = 1.0 / (1.0 + libm::exp(-(gap - self.midpoint) / self.scale));
        p >= self.threshold
    }
}

/// Least accepted gap in `[0, gap_max]`, `+inf` if none is accepted.
///
/// The model must be monotone (once accepted, larger gaps stay accepted);
/// this is checked on 64 evenly spaced samples.
pub fn ags(ctx: &MetricContext, scene: &Scene, a1: ActorId, model: &dyn GapAcceptance) -> Result<f64> {
    scene.actor(a1)?;
    const SAMPLES: usize = 64;
    let max = ctx.search.gap_max;
    let gaps = (0..SAMPLES).map(|k| max * k as f64 / (SAMPLES - 1) as f64);
    let mut first_accepted = None;
    for (k, g) in gaps.enumerate() {
        let ok = model.accepts(scene, a1, g);
        match (ok, first_accepted) {
            (true, None) => first_accepted = Some(k),
            (false, Some(_)) => return Err(Error::InvalidGapModel),
            _ => {}
        }
    }
    match first_accepted {
        None => Ok(f64::INFINITY),
        Some(0) => Ok(0.0),
        Some(k) => {
            let hi = max * k as f64 / (SAMPLES - 1) as f64;
            let lo = max * (k - 1) as f64 / (SAMPLES - 1) as f64;
            let (good, _) = crate::search::bisect(hi, lo, ctx.search.resolution, |g| model.accepts(scene, a1, g));
            Ok(good)
        }
    }
}

/// A procedure bringing an actor to a full stop.
pub trait SafetyProcedure: Debug {
    /// Offset until standstill.
    fn stop_time(&self, state: &ActorState) -> Result<f64>;
}

/// Constant braking along the direction of travel; defaults to the actor's
/// maximal braking.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct BrakeToStop {
    pub deceleration: Option<f64>,
}

impl SafetyProcedure for BrakeToStop {
    fn stop_time(&self, state: &ActorState) -> Result<f64> {
        let d = self.deceleration.map_or(-state.capabilities.a_long_min, f64::abs);
        if !(d > 0.0) || !d.is_finite() {
            return Err(Error::NonStopping);
        }
        Ok(state.speed() / d)
    }
}

/// Order of the norm in [`sp`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NormOrder {
    Finite(u32),
    Max,
}

impl NormOrder {
    pub fn norm(self, x: f64, y: f64) -> Result<f64> {
        match self {
            NormOrder::Max => Ok(x.abs().max(y.abs())),
            NormOrder::Finite(0) => Err(Error::InvalidParameter("norm order must be positive".into())),
            NormOrder::Finite(1) => Ok(x.abs() + y.abs()),
            NormOrder::Finite(2) => Ok(x.hypot(y)),
            NormOrder::Finite(k) => {
                let k = k as f64;
                Ok(libm::pow(libm::pow(x.abs(), k) + libm::pow(y.abs(), k), 1.0 / k))
            }
        }
    }
}

/// Safety potential: the `k`-norm of the stop-time excesses over the
/// nominal intersection time, negative excesses clamped to 0.
pub fn sp(
    ctx: &MetricContext,
    scene: &Scene,
    a1: ActorId,
    a2: ActorId,
    procedures: (&dyn SafetyProcedure, &dyn SafetyProcedure),
    k: NormOrder,
) -> Result<f64> {
    let (s1, s2) = (scene.actor(a1)?, scene.actor(a2)?);
    let stop = (procedures.0.stop_time(s1)?, procedures.1.stop_time(s2)?);
    let t_int = temporal::ttc(ctx, scene, a1, a2)?;
    safety_potential(stop, t_int, k)
}

/// Norm of `(t_stop1 − t_int, t_stop2 − t_int)` with clamping; 0 for `t_int = inf`.
pub fn safety_potential(t_stop: (f64, f64), t_int: f64, k: NormOrder) -> Result<f64> {
    if t_int.is_infinite() {
        k.norm(0.0, 0.0)?;
        return Ok(0.0);
    }
    k.norm((t_stop.0 - t_int).max(0.0), (t_stop.1 - t_int).max(0.0))
}

/// Minimal safe lateral and longitudinal distances of `ego` to `other`.
pub trait SafeDistance: Debug {
    fn min_distances(&self, ego: &ActorState, other: &ActorState) -> (f64, f64);
}

/// Constant thresholds `(lateral, longitudinal)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FixedSafeDistance {
    pub lateral: f64,
    pub longitudinal: f64,
}

impl SafeDistance for FixedSafeDistance {
    fn min_distances(&self, _: &ActorState, _: &ActorState) -> (f64, f64) {
        (self.lateral, self.longitudinal)
    }
}

/// Parametric responsibility-sensitive safe distances: the follower reacts
/// after `response_time` with at most `accel_max`, then brakes with at least
/// `brake_min` while the lead may brake with `brake_max`.
#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(default))]
pub struct RssSafeDistance {
    pub response_time: f64,
    pub accel_max: f64,
    pub brake_min: f64,
    pub brake_max: f64,
    pub lat_accel_max: f64,
    pub lat_brake_min: f64,
    /// Lateral fluctuation margin.
    pub lat_margin: f64,
}

impl Default for RssSafeDistance {
    fn default() -> Self {
        RssSafeDistance {
            response_time: 0.5,
            accel_max: 2.0,
            brake_min: 4.0,
            brake_max: 8.0,
            lat_accel_max: 0.2,
            lat_brake_min: 0.8,
            lat_margin: 0.1,
        }
    }
}

impl RssSafeDistance {
    /// Longitudinal distance for a rear actor at `v_r` behind a front actor at `v_f`.
    pub fn longitudinal(&self, v_r: f64, v_f: f64) -> f64 {
        let rho = self.response_time;
        let v_r = v_r.max(0.0);
        let v_f = v_f.max(0.0);
        let v_resp = v_r + rho * self.accel_max;
        let d = v_r * rho + 0.5 * self.accel_max * rho * rho + v_resp * v_resp / (2.0 * self.brake_min)
            - v_f * v_f / (2.0 * self.brake_max);
        d.max(0.0)
    }

    /// Lateral distance for a left actor with lateral speed `v_left` and a
    /// right actor with `v_right` (positive to the left).
    pub fn lateral(&self, v_left: f64, v_right: f64) -> f64 {
        let rho = self.response_time;
        let (a, b) = (self.lat_accel_max, self.lat_brake_min);
        let right_resp = v_right + rho * a;
        let left_resp = v_left - rho * a;
        let right = 0.5 * (v_right + right_resp) * rho + right_resp.max(0.0).powi(2) / (2.0 * b);
        let left = 0.5 * (v_left + left_resp) * rho - left_resp.min(0.0).powi(2) / (2.0 * b);
        self.lat_margin + (right - left).max(0.0)
    }
}

impl SafeDistance for RssSafeDistance {
    fn min_distances(&self, ego: &ActorState, other: &ActorState) -> (f64, f64) {
        let (dx, dy) = longitudinal_lateral_decompose(other.position - ego.position, ego.yaw);
        let (o_long, o_lat) = longitudinal_lateral_decompose(other.velocity, ego.yaw);
        let long = if dx >= 0.0 { self.longitudinal(ego.v_long(), o_long) } else { self.longitudinal(o_long, ego.v_long()) };
        let lat = if dy >= 0.0 { self.lateral(o_lat, ego.v_lat()) } else { self.lateral(ego.v_lat(), o_lat) };
        (lat, long)
    }
}

/// 1 if some other actor is closer than both safe distances at once, else 0.
///
/// Distances are taken in A1's frame between centers, or between footprints
/// (axis-aligned extents) in footprint mode.
pub fn rss_ds(ctx: &MetricContext, scene: &Scene, a1: ActorId, thresholds: &dyn SafeDistance) -> Result<f64> {
    let ego = scene.actor(a1)?;
    let footprint = ctx.mode() == crate::contact::DistanceMode::Footprint;
    for other in scene.others(a1) {
        let (dx, dy) = longitudinal_lateral_decompose(other.position - ego.position, ego.yaw);
        let (mut long, mut lat) = (dx.abs(), dy.abs());
        if footprint {
            let rel = other.yaw - ego.yaw;
            let (c, s) = (libm::cos(rel).abs(), libm::sin(rel).abs());
            let other_long = 0.5 * (other.length * c + other.width * s);
            let other_lat = 0.5 * (other.length * s + other.width * c);
            long = (long - 0.5 * ego.length - other_long).max(0.0);
            lat = (lat - 0.5 * ego.width - other_lat).max(0.0);
        }
        let (d_lat, d_long) = thresholds.min_distances(ego, other);
        if lat < d_lat && long < d_long {
            return Ok(1.0);
        }
    }
    Ok(0.0)
}

/// Sum of the potentials at A1's position.
pub fn pf_eval(scene: &Scene, a1: ActorId, potentials: &[&dyn PotentialField]) -> Result<f64> {
    let p = scene.actor(a1)?.position;
    Ok(potentials.iter().map(|u| u.value(p)).sum())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::contact::ContactConfig;
    use crate::geometry::Vec2;
    use crate::models::potential::{ConstantPotential, Gaussian};
    use alloc::vec;

    fn one() -> Scene {
        Scene::new(0.0, vec![ActorState::new(1, 0.0, Vec2::ZERO, Vec2::new(10.0, 0.0))]).unwrap()
    }

    #[test]
    fn ags_examples() {
        let ctx = MetricContext::default();
        let s = one();
        let v = ags(&ctx, &s, ActorId(1), &ThresholdGap { min_gap: 15.0 }).unwrap();
        assert!((v - 15.0).abs() <= 1e-3);
        assert_eq!(ags(&ctx, &s, ActorId(1), &ThresholdGap { min_gap: 0.0 }).unwrap(), 0.0);
        let l = LogisticGap { midpoint: 12.0, scale: 2.0, threshold: 0.5 };
        assert!((ags(&ctx, &s, ActorId(1), &l).unwrap() - 12.0).abs() <= 1e-3);
        assert_eq!(ags(&ctx, &s, ActorId(1), &ThresholdGap { min_gap: 5000.0 }).unwrap(), f64::INFINITY);
    }

    #[derive(Debug)]
    struct Window;
    impl GapAcceptance for Window {
        fn accepts(&self, _: &Scene, _: ActorId, gap: f64) -> bool {
            (100.0..200.0).contains(&gap)
        }
    }

    #[test]
    fn ags_rejects_non_monotone() {
        let ctx = MetricContext::default();
        assert_eq!(ags(&ctx, &one(), ActorId(1), &Window), Err(Error::InvalidGapModel));
    }

    #[test]
    fn safety_potential_examples() {
        let v = safety_potential((6.0, 8.0), 5.0, NormOrder::Finite(2)).unwrap();
        assert!((v - 10f64.sqrt()).abs() < 1e-12);
        assert_eq!(safety_potential((4.0, 5.0), 5.0, NormOrder::Finite(2)).unwrap(), 0.0);
        assert_eq!(safety_potential((6.0, 8.0), 5.0, NormOrder::Max).unwrap(), 3.0);
        assert_eq!(safety_potential((6.0, 8.0), f64::INFINITY, NormOrder::Finite(1)).unwrap(), 0.0);
        let v = safety_potential((6.0, 8.0), 5.0, NormOrder::Finite(3)).unwrap();
        assert!((v - 28f64.cbrt()).abs() < 1e-12);
    }

    #[test]
    fn brake_to_stop_times() {
        let s = ActorState::new(1, 0.0, Vec2::ZERO, Vec2::new(16.0, 0.0));
        assert_eq!(BrakeToStop::default().stop_time(&s).unwrap(), 2.0);
        assert_eq!(BrakeToStop { deceleration: Some(0.0) }.stop_time(&s), Err(Error::NonStopping));
    }

    #[test]
    fn rss_indicator() {
        let ctx = MetricContext::new(Default::default(), ContactConfig::center());
        let t = FixedSafeDistance { lateral: 2.0, longitudinal: 10.0 };
        let mk = |x: f64, y: f64| {
            Scene::new(
                0.0,
                vec![
                    ActorState::new(1, 0.0, Vec2::ZERO, Vec2::new(10.0, 0.0)),
                    ActorState::new(2, 0.0, Vec2::new(x, y), Vec2::new(10.0, 0.0)),
                ],
            )
            .unwrap()
        };
        assert_eq!(rss_ds(&ctx, &mk(8.0, 1.5), ActorId(1), &t).unwrap(), 1.0);
        assert_eq!(rss_ds(&ctx, &mk(12.0, 1.5), ActorId(1), &t).unwrap(), 0.0);
        assert_eq!(rss_ds(&ctx, &one(), ActorId(1), &t).unwrap(), 0.0);
    }

    #[test]
    fn rss_longitudinal_formula() {
        let r = RssSafeDistance::default();
        // 10·0.5 + 0.25 + 11²/8 − 10²/16
        assert!((r.longitudinal(10.0, 10.0) - (5.0 + 0.25 + 121.0 / 8.0 - 100.0 / 16.0)).abs() < 1e-12);
        assert_eq!(r.longitudinal(0.0, 40.0), 0.0);
    }

    #[test]
    fn potential_sum() {
        let s = one();
        assert_eq!(pf_eval(&s, ActorId(1), &[]).unwrap(), 0.0);
        let (a, b) = (ConstantPotential(1.5), ConstantPotential(2.5));
        assert_eq!(pf_eval(&s, ActorId(1), &[&a, &b]).unwrap(), 4.0);
        let g = Gaussian { center: Vec2::new(3.0, 4.0), amplitude: 2.0, sigma: 5.0 };
        let v = pf_eval(&s, ActorId(1), &[&g]).unwrap();
        assert!((v - 2.0 * libm::exp(-25.0 / 50.0)).abs() < 1e-12);
    }
}
