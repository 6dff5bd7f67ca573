//! Required accelerations, deceleration to safety time and threat numbers.

#[allow(unused_imports)] // float methods come from std when it is linked
use num_traits::Float;
use crate::error::{Error, Result};
use crate::geometry::{longitudinal_lateral_decompose, Vec2};
use crate::models::{MotionModel, Predictor, Trajectory, TrajectoryPoint};
use crate::scene::{actor_distance, temporal, MetricContext};
use crate::search::bisect;
use crate::types::{ActorId, ActorState, Flag, Flagged, Scene};

/// A1 under constant longitudinal acceleration `a` along its direction of
/// travel, held at rest once stopped.
fn longitudinal_trajectory(ctx: &MetricContext, s1: &ActorState, a: f64) -> Result<Trajectory> {
    let dir = s1.velocity.normalized().unwrap_or_else(|| s1.heading());
    let s = s1.clone().with_acceleration(dir * a);
    let p = Predictor { model: MotionModel::ConstantAcceleration, ..ctx.predictor.clone() };
    p.predict(&s)
}

/// A1's nominal prediction with an added constant lateral acceleration
/// `a` (positive to the left of its current heading).
fn lateral_trajectory(ctx: &MetricContext, nominal: &Trajectory, s1: &ActorState, a: f64) -> Result<Trajectory> {
    let normal = s1.heading().perp();
    let pts = ctx
        .predictor
        .sample_times()
        .into_iter()
        .map(|t| nominal.at(t))
        .map(|p| TrajectoryPoint {
            position: p.position + normal * (0.5 * a * p.t * p.t),
            velocity: p.velocity + normal * (a * p.t),
            ..p
        })
        .collect();
    Trajectory::new(pts)
}

/// Largest (least braking) non-positive constant longitudinal acceleration of
/// A1 that avoids contact with A2's prediction.
///
/// Returns the configured floor flagged [`Flag::Unavoidable`] if even the
/// floor collides.
pub fn a_long_req(ctx: &MetricContext, scene: &Scene, a1: ActorId, a2: ActorId) -> Result<Flagged<f64>> {
    let (s1, s2) = (scene.actor(a1)?, scene.actor(a2)?);
    let t2 = ctx.predict(s2)?;
    let avoids = |a: f64| longitudinal_trajectory(ctx, s1, a).map(|t1| !ctx.collides(s1, &t1, s2, &t2));
    if avoids(0.0)? {
        return Ok(Flagged::plain(0.0));
    }
    let floor = ctx.search.accel_floor;
    if !avoids(floor)? {
        return Ok(Flagged::flagged(floor, Flag::Unavoidable));
    }
    let (good, _) = bisect(floor, 0.0, ctx.search.resolution, |a| avoids(a).unwrap_or(false));
    Ok(Flagged::plain(good))
}

/// Least constant lateral acceleration magnitude (left or right) that lets A1
/// evade A2's prediction.
///
/// Returns the configured ceiling flagged [`Flag::Unavoidable`] if neither
/// side evades within it.
pub fn a_lat_req(ctx: &MetricContext, scene: &Scene, a1: ActorId, a2: ActorId) -> Result<Flagged<f64>> {
    let (s1, s2) = (scene.actor(a1)?, scene.actor(a2)?);
    let t2 = ctx.predict(s2)?;
    let nominal = ctx.predict(s1)?;
    let avoids = |a: f64| lateral_trajectory(ctx, &nominal, s1, a).map(|t1| !ctx.collides(s1, &t1, s2, &t2));
    if avoids(0.0)? {
        return Ok(Flagged::plain(0.0));
    }
    let ceiling = ctx.search.lateral_ceiling;
    let mut best = f64::INFINITY;
    for sign in [1.0, -1.0] {
        if avoids(sign * ceiling)? {
            let (good, _) = bisect(ceiling, 0.0, ctx.search.resolution, |a| avoids(sign * a).unwrap_or(false));
            best = best.min(good);
        }
    }
    Ok(if best.is_finite() { Flagged::plain(best) } else { Flagged::flagged(ceiling, Flag::Unavoidable) })
}

/// Closed form of the required lateral acceleration for car following with
/// constant accelerations, in A1's frame.
///
/// Uses A1's TTC under the context model; `0` when no collision is predicted.
pub fn a_lat_req_closed_form(ctx: &MetricContext, scene: &Scene, a1: ActorId, a2: ActorId) -> Result<f64> {
    let (s1, s2) = (scene.actor(a1)?, scene.actor(a2)?);
    let t = temporal::ttc(ctx, scene, a1, a2)?;
    if t.is_infinite() {
        return Ok(0.0);
    }
    if t == 0.0 {
        return Err(Error::InvalidParameter("closed form undefined at contact".into()));
    }
    let lat = |v: Vec2| longitudinal_lateral_decompose(v, s1.yaw).1;
    let (v1, v2) = (lat(s1.velocity), lat(s2.velocity));
    let a2_lat = lat(s2.acceleration);
    let dp = lat(s2.position - s1.position);
    let half = 0.5 * (s1.width + s2.width);
    let side = |w: f64| a2_lat + 2.0 * (v2 - v1) / t + 2.0 / (t * t) * (w + dp);
    Ok(side(half).abs().min(side(-half).abs()))
}

/// Norm of the longitudinal and lateral requirements.
pub fn a_req(ctx: &MetricContext, scene: &Scene, a1: ActorId, a2: ActorId) -> Result<Flagged<f64>> {
    let long = a_long_req(ctx, scene, a1, a2)?;
    let lat = a_lat_req(ctx, scene, a1, a2)?;
    let flag = long.flag.and(lat.flag);
    Ok(Flagged { value: long.value.hypot(lat.value), flag })
}

/// `a_req` when SPrET is below 3 s², otherwise 0.
pub fn a_req_cond(ctx: &MetricContext, scene: &Scene, a1: ActorId, a2: ActorId) -> Result<Flagged<f64>> {
    if temporal::spret(ctx, scene, a1, a2)? < 3.0 {
        a_req(ctx, scene, a1, a2)
    } else {
        Ok(Flagged::plain(0.0))
    }
}

/// Deceleration A1 needs to keep a safety time `t_s` behind a lead at
/// constant speed, `(v1 − v2)² / (2 (d − v2 t_s))`.
///
/// Speeds are projected on A1's heading. Returns 0 when A1 is not closing and
/// `+inf` flagged [`Flag::SafetyDistanceViolated`] when `d ≤ v2 t_s`.
pub fn dst(ctx: &MetricContext, scene: &Scene, a1: ActorId, a2: ActorId, t_s: f64) -> Result<Flagged<f64>> {
    if !(t_s >= 0.0) || !t_s.is_finite() {
        return Err(Error::InvalidParameter("safety time must be non-negative".into()));
    }
    let (s1, s2) = (scene.actor(a1)?, scene.actor(a2)?);
    let v1 = s1.v_long();
    let v2 = longitudinal_lateral_decompose(s2.velocity, s1.yaw).0;
    if v1 <= v2 {
        return Ok(Flagged::plain(0.0));
    }
    let denom = actor_distance(s1, s2, ctx.mode()) - v2 * t_s;
    if denom <= 0.0 {
        return Ok(Flagged::flagged(f64::INFINITY, Flag::SafetyDistanceViolated));
    }
    Ok(Flagged::plain((v1 - v2).powi(2) / (2.0 * denom)))
}

/// Brake threat number `a_long_req / a_long_min`.
pub fn btn(ctx: &MetricContext, scene: &Scene, a1: ActorId, a2: ActorId) -> Result<Flagged<f64>> {
    let cap = scene.actor(a1)?.capabilities.a_long_min;
    if !(cap < 0.0) {
        return Err(Error::InvalidCapability);
    }
    let r = a_long_req(ctx, scene, a1, a2)?;
    Ok(Flagged { value: brake_threat_number(r.value, cap), flag: r.flag })
}

/// Steer threat number `a_lat_req / a_lat_max`.
pub fn stn(ctx: &MetricContext, scene: &Scene, a1: ActorId, a2: ActorId) -> Result<Flagged<f64>> {
    let cap = scene.actor(a1)?.capabilities.a_lat_max;
    if !(cap > 0.0) {
        return Err(Error::InvalidCapability);
    }
    let r = a_lat_req(ctx, scene, a1, a2)?;
    Ok(Flagged { value: steer_threat_number(r.value, cap), flag: r.flag })
}

/// `a_long_req / a_long_min` of two non-positive numbers.
pub fn brake_threat_number(a_long_req: f64, a_long_min: f64) -> f64 {
    // 0 / negative would give -0
    if a_long_req == 0.0 {
        0.0
    } else {
        a_long_req / a_long_min
    }
}

pub fn steer_threat_number(a_lat_req: f64, a_lat_max: f64) -> f64 {
    a_lat_req / a_lat_max
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn follow(v1: f64, v2: f64, gap: f64) -> Scene {
        Scene::new(
            0.0,
            vec![
                ActorState::new(1, 0.0, Vec2::ZERO, Vec2::new(v1, 0.0)),
                ActorState::new(2, 0.0, Vec2::new(gap + 4.0, 0.0), Vec2::new(v2, 0.0)).with_yaw(0.0),
            ],
        )
        .unwrap()
    }

    #[test]
    fn a_long_req_car_following() {
        let ctx = MetricContext::default();
        let r = a_long_req(&ctx, &follow(20.0, 10.0, 50.0), ActorId(1), ActorId(2)).unwrap();
        assert!((r.value + 1.0).abs() <= 1e-3 && r.flag.is_none(), "{r:?}");
        assert_eq!(a_long_req(&ctx, &follow(10.0, 20.0, 50.0), ActorId(1), ActorId(2)).unwrap().value, 0.0);
    }

    #[test]
    fn a_long_req_unavoidable_when_touching() {
        let ctx = MetricContext::default();
        let r = a_long_req(&ctx, &follow(20.0, 10.0, -0.5), ActorId(1), ActorId(2)).unwrap();
        assert_eq!(r, Flagged::flagged(-50.0, Flag::Unavoidable));
    }

    #[test]
    fn a_lat_req_matches_closed_form() {
        let ctx = MetricContext::default();
        let s = follow(20.0, 0.0, 50.0);
        let r = a_lat_req(&ctx, &s, ActorId(1), ActorId(2)).unwrap();
        let c = a_lat_req_closed_form(&ctx, &s, ActorId(1), ActorId(2)).unwrap();
        assert!((c - 0.64).abs() < 1e-9, "{c}");
        assert!((r.value - c).abs() <= 1e-3, "{r:?} {c}");
    }

    #[test]
    fn a_req_norm_and_condition() {
        let ctx = MetricContext::default();
        let s = follow(20.0, 0.0, 50.0);
        let long = a_long_req(&ctx, &s, ActorId(1), ActorId(2)).unwrap().value;
        let lat = a_lat_req(&ctx, &s, ActorId(1), ActorId(2)).unwrap().value;
        let r = a_req(&ctx, &s, ActorId(1), ActorId(2)).unwrap().value;
        assert!(r >= long.abs().max(lat) && r <= long.abs() + lat);
        // colinear paths: SPrET is 0, so the condition holds
        assert_eq!(a_req_cond(&ctx, &s, ActorId(1), ActorId(2)).unwrap().value, r);
    }

    #[test]
    fn dst_examples() {
        let ctx = MetricContext::default();
        let s = follow(20.0, 10.0, 50.0);
        assert_eq!(dst(&ctx, &s, ActorId(1), ActorId(2), 0.0).unwrap().value, 1.0);
        assert!((dst(&ctx, &s, ActorId(1), ActorId(2), 2.0).unwrap().value - 100.0 / 60.0).abs() < 1e-12);
        assert_eq!(dst(&ctx, &follow(10.0, 10.0, 50.0), ActorId(1), ActorId(2), 0.0).unwrap().value, 0.0);
        assert_eq!(
            dst(&ctx, &s, ActorId(1), ActorId(2), 5.0).unwrap(),
            Flagged::flagged(f64::INFINITY, Flag::SafetyDistanceViolated)
        );
    }

    #[test]
    fn threat_numbers() {
        assert_eq!(brake_threat_number(-1.0, -8.0), 0.125);
        assert_eq!(brake_threat_number(0.0, -8.0), 0.0);
        assert_eq!(steer_threat_number(2.0, 5.0), 0.4);
        let ctx = MetricContext::default();
        let mut s = follow(20.0, 10.0, 50.0);
        s.actors[0].capabilities.a_long_min = 0.0;
        assert_eq!(btn(&ctx, &s, ActorId(1), ActorId(2)), Err(Error::InvalidCapability));
    }
}
