//! Time-based scene metrics: TTC family, closest encounter, headway,
//! encroachment predictions, stopping distance and jerk.

#[allow(unused_imports)] // float methods come from std when it is linked
use num_traits::Float;
use alloc::vec::Vec;

use crate::contact::{closest_encounter, first_contact, Body, DistanceMode};
use crate::error::{Error, Result};
use crate::geometry::{longitudinal_lateral_decompose, OrientedRect, Vec2};
use crate::models::{MotionModel, Predictor, Trajectory, TrajectorySet};
use crate::scene::{actor_distance, actor_polygon_distance, MetricContext};
use crate::types::{ActorId, ActorState, Scene};

fn pair(scene: &Scene, a1: ActorId, a2: ActorId) -> Result<(&ActorState, &ActorState)> {
    Ok((scene.actor(a1)?, scene.actor(a2)?))
}

/// Time to collision under the context's prediction model; `+inf` when no
/// contact is predicted within the horizon.
pub fn ttc(ctx: &MetricContext, scene: &Scene, a1: ActorId, a2: ActorId) -> Result<f64> {
    let (s1, s2) = pair(scene, a1, a2)?;
    let (t1, t2) = (ctx.predict(s1)?, ctx.predict(s2)?);
    Ok(ctx.contact_time(s1, &t1, s2, &t2))
}

/// Potential time to collision in car following: A1 at constant speed, the
/// lead A2 at constant deceleration until it stops.
///
/// Speeds and accelerations are projected on A1's heading. The gap is center
/// to center, or bumper to bumper in footprint mode.
pub fn pttc(ctx: &MetricContext, scene: &Scene, a1: ActorId, a2: ActorId) -> Result<f64> {
    let (s1, s2) = pair(scene, a1, a2)?;
    let proj = |v: Vec2| longitudinal_lateral_decompose(v, s1.yaw).0;
    let mut d = proj(s2.position - s1.position);
    if ctx.mode() == DistanceMode::Footprint {
        d -= 0.5 * (s1.length + s2.length);
    }
    if d <= 0.0 {
        return Ok(0.0);
    }
    let v1 = s1.v_long();
    let v2 = proj(s2.velocity);
    let a2 = proj(s2.acceleration);
    if a2 == 0.0 {
        let cv = ctx.with_predictor(Predictor { model: MotionModel::ConstantVelocity, ..ctx.predictor.clone() });
        return ttc(&cv, scene, a1, a2_id(s2));
    }
    let t = pttc_1d(d, v1, v2, a2);
    Ok(if t <= ctx.horizon() { t } else { f64::INFINITY })
}

fn a2_id(s: &ActorState) -> ActorId {
    s.id
}

/// Smallest `t ≥ 0` with `d + (v2 − v1) t + ½ a2 t² = 0`, the lead stopping
/// (and staying) at zero speed when braking.
pub fn pttc_1d(d: f64, v1: f64, v2: f64, a2: f64) -> f64 {
    if d <= 0.0 {
        return 0.0;
    }
    let t_stop = if a2 < 0.0 && v2 > 0.0 { v2 / -a2 } else { f64::INFINITY };
    // roots of ½ a2 t² + (v2 − v1) t + d
    let (qa, qb, qc) = (0.5 * a2, v2 - v1, d);
    let mut root = f64::INFINITY;
    if qa == 0.0 {
        if qb < 0.0 {
            root = -qc / qb;
        }
    } else {
        let disc = qb * qb - 4.0 * qa * qc;
        if disc >= 0.0 {
            let sq = disc.sqrt();
            for r in [(-qb - sq) / (2.0 * qa), (-qb + sq) / (2.0 * qa)] {
                if r >= 0.0 && r < root {
                    root = r;
                }
            }
        }
    }
    if root <= t_stop {
        return root;
    }
    if t_stop.is_finite() {
        // lead stopped: it rests at d + v2 t_s + ½ a2 t_s² ahead of A1's start
        let lead = d + v2 * t_stop + 0.5 * a2 * t_stop * t_stop;
        if v1 > 0.0 {
            return lead / v1;
        }
    }
    f64::INFINITY
}

/// Target of a time-to-object query.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Target {
    ConflictArea(u32),
    /// Index into the scene's static objects.
    StaticObject(usize),
    Actor(ActorId),
}

/// Time until A1 reaches a conflict area, static object or actor; for a
/// moving actor this is the TTC.
pub fn tto(ctx: &MetricContext, scene: &Scene, a1: ActorId, target: Target) -> Result<f64> {
    let s1 = scene.actor(a1)?;
    let polygon: &[Vec2] = match target {
        Target::Actor(a2) => return ttc(ctx, scene, a1, a2),
        Target::ConflictArea(id) => &scene.conflict_area(id)?.polygon,
        Target::StaticObject(i) => scene
            .static_objects
            .get(i)
            .ok_or_else(|| Error::InvalidParameter(alloc::format!("no static object {i}")))?,
    };
    let t1 = ctx.predict(s1)?;
    let b1 = Body::actor(&t1, s1, ctx.mode());
    Ok(first_contact(&b1, &Body::Static(polygon), 0.0, ctx.horizon(), &ctx.contact).unwrap_or(f64::INFINITY))
}

/// Distance of closest encounter and its (earliest) time.
pub fn dce_ttce(ctx: &MetricContext, scene: &Scene, a1: ActorId, a2: ActorId) -> Result<(f64, f64)> {
    let (s1, s2) = pair(scene, a1, a2)?;
    let (t1, t2) = (ctx.predict(s1)?, ctx.predict(s2)?);
    let b1 = Body::actor(&t1, s1, ctx.mode());
    let b2 = Body::actor(&t2, s2, ctx.mode());
    Ok(closest_encounter(&b1, &b2, 0.0, ctx.horizon(), &ctx.contact))
}

/// Worst time to collision: the earliest contact over all pairs of traces.
pub fn wttc(
    ctx: &MetricContext,
    s1: &ActorState,
    set1: &TrajectorySet,
    s2: &ActorState,
    set2: &TrajectorySet,
) -> Result<f64> {
    if set1.is_empty() || set2.is_empty() {
        return Err(Error::EmptyTrajectorySet);
    }
    let mut best = f64::INFINITY;
    for t1 in set1.iter() {
        for t2 in set2.iter() {
            let b1 = Body::actor(t1, s1, ctx.mode());
            let b2 = Body::actor(t2, s2, ctx.mode());
            if let Some(t) = first_contact(&b1, &b2, 0.0, ctx.horizon().min(best), &ctx.contact) {
                best = best.min(t);
            }
        }
    }
    Ok(best)
}

/// Time until A1 reaches the current position of A2.
pub fn thw(ctx: &MetricContext, scene: &Scene, a1: ActorId, a2: ActorId) -> Result<f64> {
    let (s1, s2) = pair(scene, a1, a2)?;
    let t1 = ctx.predict(s1)?;
    let here = Trajectory::stationary(s2.position, s2.yaw, ctx.horizon());
    Ok(ctx.contact_time(s1, &t1, s2, &here))
}

/// Current distance between A1 and A2.
pub fn hw(ctx: &MetricContext, scene: &Scene, a1: ActorId, a2: ActorId) -> Result<f64> {
    let (s1, s2) = pair(scene, a1, a2)?;
    Ok(actor_distance(s1, s2, ctx.mode()))
}

#[derive(Clone, Copy, Debug, PartialEq)]
enum Gap {
    Linear,
    Squared,
}

/// Predicted encroachment time: the smallest difference of arrival times at a
/// common point of the two predicted paths; `+inf` if the paths never meet.
pub fn pret(ctx: &MetricContext, scene: &Scene, a1: ActorId, a2: ActorId) -> Result<f64> {
    encroachment(ctx, scene, a1, a2, Gap::Linear)
}

/// Squared variant: smallest `|t̃1² − t̃2²|`.
pub fn spret(ctx: &MetricContext, scene: &Scene, a1: ActorId, a2: ActorId) -> Result<f64> {
    encroachment(ctx, scene, a1, a2, Gap::Squared)
}

/// PrET under the constant velocity model.
pub fn ta(ctx: &MetricContext, scene: &Scene, a1: ActorId, a2: ActorId) -> Result<f64> {
    let cv = ctx.with_predictor(Predictor { model: MotionModel::ConstantVelocity, ..ctx.predictor.clone() });
    pret(&cv, scene, a1, a2)
}

fn encroachment(ctx: &MetricContext, scene: &Scene, a1: ActorId, a2: ActorId, gap: Gap) -> Result<f64> {
    let (s1, s2) = pair(scene, a1, a2)?;
    let (t1, t2) = (ctx.predict(s1)?, ctx.predict(s2)?);
    Ok(match ctx.mode() {
        DistanceMode::Center => path_encroachment(&t1, &t2, gap),
        DistanceMode::Footprint => footprint_encroachment(ctx, s1, &t1, s2, &t2, gap),
    })
}

fn gap_value(gap: Gap, x: f64, y: f64) -> f64 {
    match gap {
        Gap::Linear => (x - y).abs(),
        Gap::Squared => (x * x - y * y).abs(),
    }
}

/// Minimum of `gap(t1(u), t2(u))` for `u ∈ [0, 1]` with both times linear in `u`.
fn linear_pair_min(gap: Gap, t1: (f64, f64), t2: (f64, f64)) -> f64 {
    let f = |u: f64| gap_value(gap, t1.0 + (t1.1 - t1.0) * u, t2.0 + (t2.1 - t2.0) * u);
    let mut best = f(0.0).min(f(1.0));
    // difference t1 − t2 is linear; its root gives zero gap
    let (d0, d1) = (t1.0 - t2.0, t1.1 - t2.1);
    if d0 != d1 {
        let u = d0 / (d0 - d1);
        if (0.0..=1.0).contains(&u) {
            best = best.min(f(u));
        }
    }
    best
}

/// Minimum gap between a fixed time `t` and any time of `[lo, hi]`.
fn interval_gap(gap: Gap, t: f64, lo: f64, hi: f64) -> f64 {
    gap_value(gap, t, t.clamp(lo, hi))
}

fn path_encroachment(a: &Trajectory, b: &Trajectory, gap: Gap) -> f64 {
    const EPS: f64 = 1e-12;
    let pa = a.points();
    let pb = b.points();
    let seg = |p: &[crate::models::TrajectoryPoint], i: usize| {
        if p.len() == 1 {
            (p[0], p[0])
        } else {
            (p[i], p[i + 1])
        }
    };
    let na = pa.len().saturating_sub(1).max(1);
    let nb = pb.len().saturating_sub(1).max(1);
    let mut best = f64::INFINITY;
    for i in 0..na {
        let (a0, a1) = seg(pa, i);
        let da = a1.position - a0.position;
        for j in 0..nb {
            let (b0, b1) = seg(pb, j);
            let db = b1.position - b0.position;
            // bounding-box rejection
            let (amin, amax) = bbox(a0.position, a1.position);
            let (bmin, bmax) = bbox(b0.position, b1.position);
            if amin.x > bmax.x + EPS || bmin.x > amax.x + EPS || amin.y > bmax.y + EPS || bmin.y > amax.y + EPS {
                continue;
            }
            let la = da.norm_squared();
            let lb = db.norm_squared();
            let v = match (la > EPS, lb > EPS) {
                (false, false) => {
                    if a0.position.distance(b0.position) <= 1e-9 {
                        // both at rest at the same point: closest times of two intervals
                        let (x0, x1, y0, y1) = (a0.t, a1.t, b0.t, b1.t);
                        if x1 >= y0 && y1 >= x0 {
                            0.0
                        } else if x1 < y0 {
                            gap_value(gap, x1, y0)
                        } else {
                            gap_value(gap, x0, y1)
                        }
                    } else {
                        f64::INFINITY
                    }
                }
                (false, true) => match param_on(b0.position, db, a0.position) {
                    Some(w) => interval_gap(gap, b0.t + w * (b1.t - b0.t), a0.t, a1.t),
                    None => f64::INFINITY,
                },
                (true, false) => match param_on(a0.position, da, b0.position) {
                    Some(u) => interval_gap(gap, a0.t + u * (a1.t - a0.t), b0.t, b1.t),
                    None => f64::INFINITY,
                },
                (true, true) => segment_pair(a0, a1, b0, b1, gap),
            };
            best = best.min(v);
        }
    }
    best
}

fn bbox(p: Vec2, q: Vec2) -> (Vec2, Vec2) {
    (Vec2::new(p.x.min(q.x), p.y.min(q.y)), Vec2::new(p.x.max(q.x), p.y.max(q.y)))
}

/// Parameter of `p` on segment `o + s·d` if it lies on it.
fn param_on(o: Vec2, d: Vec2, p: Vec2) -> Option<f64> {
    let l2 = d.norm_squared();
    let s = (p - o).dot(d) / l2;
    if !(-1e-12..=1.0 + 1e-12).contains(&s) {
        return None;
    }
    let s = s.clamp(0.0, 1.0);
    if (o + d * s).distance(p) <= 1e-9 {
        Some(s)
    } else {
        None
    }
}

fn segment_pair(
    a0: crate::models::TrajectoryPoint,
    a1: crate::models::TrajectoryPoint,
    b0: crate::models::TrajectoryPoint,
    b1: crate::models::TrajectoryPoint,
    gap: Gap,
) -> f64 {
    let da = a1.position - a0.position;
    let db = b1.position - b0.position;
    let denom = da.cross(db);
    let r = b0.position - a0.position;
    let scale = da.norm() * db.norm();
    if denom.abs() > 1e-12 * scale {
        let u = r.cross(db) / denom;
        let w = r.cross(da) / denom;
        let tol = 1e-12;
        if (-tol..=1.0 + tol).contains(&u) && (-tol..=1.0 + tol).contains(&w) {
            let (u, w) = (u.clamp(0.0, 1.0), w.clamp(0.0, 1.0));
            return gap_value(gap, a0.t + u * (a1.t - a0.t), b0.t + w * (b1.t - b0.t));
        }
        return f64::INFINITY;
    }
    // parallel: only collinear overlaps count
    if r.cross(da).abs() > 1e-9 * da.norm() {
        return f64::INFINITY;
    }
    let la = da.norm_squared();
    // parameters of B's endpoints along A
    let s0 = r.dot(da) / la;
    let s1 = (b1.position - a0.position).dot(da) / la;
    let lo = s0.min(s1).max(0.0);
    let hi = s0.max(s1).min(1.0);
    if lo > hi + 1e-12 {
        return f64::INFINITY;
    }
    let time_a = |s: f64| a0.t + s * (a1.t - a0.t);
    let time_b = |s: f64| {
        let w = (s - s0) / (s1 - s0);
        b0.t + w * (b1.t - b0.t)
    };
    linear_pair_min(gap, (time_a(lo), time_a(hi)), (time_b(lo), time_b(hi)))
}

fn footprint_encroachment(
    ctx: &MetricContext,
    s1: &ActorState,
    t1: &Trajectory,
    s2: &ActorState,
    t2: &Trajectory,
    gap: Gap,
) -> f64 {
    let h = ctx.horizon();
    let n = 400usize;
    let dt = h / n as f64;
    let shape = |tr: &Trajectory, s: &ActorState, t: f64| {
        let p = tr.at(t);
        (p.position, OrientedRect::new(p.position, p.heading, s.length, s.width).polygon())
    };
    let r1 = 0.5 * s1.length.hypot(s1.width);
    let r2 = 0.5 * s2.length.hypot(s2.width);
    let samples1: Vec<_> = (0..=n).map(|k| shape(t1, s1, k as f64 * dt)).collect();
    let samples2: Vec<_> = (0..=n).map(|k| shape(t2, s2, k as f64 * dt)).collect();
    let overlaps = |x: &(Vec2, Vec<Vec2>), y: &(Vec2, Vec<Vec2>)| {
        x.0.distance(y.0) <= r1 + r2
            && crate::geometry::signed_separation(
                &crate::geometry::Shape::Polygon(x.1.clone()),
                &crate::geometry::Shape::Polygon(y.1.clone()),
            ) < -ctx.contact.overlap_tolerance
    };
    let mut best = f64::INFINITY;
    let mut best_pair = None;
    for (i, x) in samples1.iter().enumerate() {
        for (j, y) in samples2.iter().enumerate() {
            let v = gap_value(gap, i as f64 * dt, j as f64 * dt);
            if v < best && overlaps(x, y) {
                best = v;
                best_pair = Some((i, j));
            }
        }
    }
    let Some((i, j)) = best_pair else { return f64::INFINITY };
    if best == 0.0 {
        return 0.0;
    }
    // refine: move the later arrival back, then the earlier one forward,
    // each within one sampling step and while the boxes still overlap
    let res = ctx.contact.time_tolerance.max(1e-6);
    let (mut ti, mut tj) = (i as f64 * dt, j as f64 * dt);
    if ti > tj {
        let fixed = shape(t2, s2, tj);
        ti = crate::search::bisect(ti, (ti - dt).max(tj), res, |t| overlaps(&shape(t1, s1, t), &fixed)).0;
        let fixed = shape(t1, s1, ti);
        tj = crate::search::bisect(tj, (tj + dt).min(ti), res, |t| overlaps(&fixed, &shape(t2, s2, t))).0;
    } else {
        let fixed = shape(t1, s1, ti);
        tj = crate::search::bisect(tj, (tj - dt).max(ti), res, |t| overlaps(&fixed, &shape(t2, s2, t))).0;
        let fixed = shape(t2, s2, tj);
        ti = crate::search::bisect(ti, (ti + dt).min(tj), res, |t| overlaps(&shape(t1, s1, t), &fixed)).0;
    }
    let refined = gap_value(gap, ti, tj);
    best.min(refined)
}

/// Minimum stopping distance `v_long² / (2 |a_long_min|)`.
pub fn msd(scene: &Scene, a1: ActorId) -> Result<f64> {
    let s = scene.actor(a1)?;
    s.capabilities.validate()?;
    let v = s.v_long();
    Ok(v * v / (2.0 * s.capabilities.a_long_min.abs()))
}

/// Proportion of stopping distance: distance to a conflict area over MSD
/// (`+inf` for a stationary actor).
pub fn psd(ctx: &MetricContext, scene: &Scene, a1: ActorId, ca: u32) -> Result<f64> {
    let s = scene.actor(a1)?;
    let m = msd(scene, a1)?;
    let d = actor_polygon_distance(s, &scene.conflict_area(ca)?.polygon, ctx.mode());
    Ok(if m == 0.0 { f64::INFINITY } else { d / m })
}

/// Lateral and longitudinal jerk `(LatJ, LongJ)` in the actor's yaw frame.
pub fn jerk(scene: &Scene, a1: ActorId) -> Result<(f64, f64)> {
    let s = scene.actor(a1)?;
    let j = s.jerk.ok_or(Error::MissingJerk(a1))?;
    let (long, lat) = longitudinal_lateral_decompose(j, s.yaw);
    Ok((lat, long))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::contact::ContactConfig;
    use crate::types::ConflictArea;

    fn center_ctx() -> MetricContext {
        MetricContext::new(Predictor::new(MotionModel::ConstantVelocity, 20.0, 0.01).unwrap(), ContactConfig::center())
    }

    fn scene(actors: Vec<ActorState>) -> Scene {
        Scene::new(0.0, actors).unwrap()
    }

    fn follow(v1: f64, v2: f64, gap: f64) -> Scene {
        scene(alloc::vec![
            ActorState::new(1, 0.0, Vec2::ZERO, Vec2::new(v1, 0.0)),
            ActorState::new(2, 0.0, Vec2::new(gap, 0.0), Vec2::new(v2, 0.0)).with_yaw(0.0),
        ])
    }

    fn crossing() -> Scene {
        scene(alloc::vec![
            ActorState::new(1, 0.0, Vec2::new(0.0, -40.0), Vec2::new(0.0, 10.0)),
            ActorState::new(2, 0.0, Vec2::new(-30.0, 0.0), Vec2::new(10.0, 0.0)),
        ])
    }

    #[test]
    fn ttc_examples() {
        let ctx = center_ctx();
        let t = ttc(&ctx, &follow(20.0, 10.0, 100.0), ActorId(1), ActorId(2)).unwrap();
        assert!((t - 10.0).abs() < 1e-6);
        assert_eq!(ttc(&ctx, &follow(10.0, 20.0, 100.0), ActorId(1), ActorId(2)).unwrap(), f64::INFINITY);
        let fp = MetricContext { contact: ContactConfig::footprint(), ..ctx };
        assert_eq!(ttc(&fp, &follow(10.0, 10.0, 3.0), ActorId(1), ActorId(2)).unwrap(), 0.0);
    }

    #[test]
    fn pttc_examples() {
        let ctx = center_ctx();
        let mut s = follow(20.0, 10.0, 20.0);
        s.actors[1].acceleration = Vec2::new(-2.0, 0.0);
        let t = pttc(&ctx, &s, ActorId(1), ActorId(2)).unwrap();
        assert!((t - (-5.0 + 45f64.sqrt())).abs() < 1e-12, "{t}");
        assert_eq!(pttc(&ctx, &follow(10.0, 20.0, 20.0), ActorId(1), ActorId(2)).unwrap(), f64::INFINITY);
        assert_eq!(pttc(&ctx, &follow(10.0, 20.0, 0.0), ActorId(1), ActorId(2)).unwrap(), 0.0);
    }

    #[test]
    fn pttc_after_lead_stops() {
        // lead stops after 2.5 s having covered 6.25 m; follower at 1 m/s
        assert!((pttc_1d(10.0, 1.0, 5.0, -2.0) - 16.25).abs() < 1e-12);
    }

    #[test]
    fn tto_to_conflict_area() {
        let ctx = center_ctx();
        let s = scene(alloc::vec![ActorState::new(1, 0.0, Vec2::ZERO, Vec2::new(10.0, 0.0))])
            .with_conflict_area(ConflictArea::rect(7, 30.0, -3.0, 34.0, 3.0).unwrap())
            .with_conflict_area(ConflictArea::rect(8, -1.0, -1.0, 1.0, 1.0).unwrap());
        let t = tto(&ctx, &s, ActorId(1), Target::ConflictArea(7)).unwrap();
        assert!((t - 3.0).abs() < 1e-6);
        assert_eq!(tto(&ctx, &s, ActorId(1), Target::ConflictArea(8)).unwrap(), 0.0);
    }

    #[test]
    fn dce_examples() {
        let ctx = center_ctx();
        let (d, t) = dce_ttce(&ctx, &crossing(), ActorId(1), ActorId(2)).unwrap();
        assert!((t - 3.5).abs() < 1e-9 && (d - 50f64.sqrt()).abs() < 1e-9);
        let par = scene(alloc::vec![
            ActorState::new(1, 0.0, Vec2::ZERO, Vec2::new(10.0, 0.0)),
            ActorState::new(2, 0.0, Vec2::new(0.0, 5.0), Vec2::new(10.0, 0.0)),
        ]);
        let (d, t) = dce_ttce(&ctx, &par, ActorId(1), ActorId(2)).unwrap();
        assert!((d - 5.0).abs() < 1e-12 && t == 0.0);
    }

    #[test]
    fn thw_and_hw() {
        let ctx = center_ctx();
        let s = follow(20.0, 20.0, 50.0);
        assert!((thw(&ctx, &s, ActorId(1), ActorId(2)).unwrap() - 2.5).abs() < 1e-6);
        assert_eq!(hw(&ctx, &s, ActorId(1), ActorId(2)).unwrap(), 50.0);
        assert_eq!(thw(&ctx, &follow(0.0, 20.0, 50.0), ActorId(1), ActorId(2)).unwrap(), f64::INFINITY);
        assert_eq!(thw(&ctx, &follow(10.0, 0.0, 0.0), ActorId(1), ActorId(2)).unwrap(), 0.0);
    }

    #[test]
    fn pret_examples() {
        let ctx = center_ctx();
        let s = crossing();
        assert!((pret(&ctx, &s, ActorId(1), ActorId(2)).unwrap() - 1.0).abs() < 1e-9);
        assert!((spret(&ctx, &s, ActorId(1), ActorId(2)).unwrap() - 7.0).abs() < 1e-9);
        assert!((ta(&ctx, &s, ActorId(1), ActorId(2)).unwrap() - 1.0).abs() < 1e-9);
        let par = scene(alloc::vec![
            ActorState::new(1, 0.0, Vec2::ZERO, Vec2::new(10.0, 0.0)),
            ActorState::new(2, 0.0, Vec2::new(0.0, 5.0), Vec2::new(10.0, 0.0)),
        ]);
        assert_eq!(pret(&ctx, &par, ActorId(1), ActorId(2)).unwrap(), f64::INFINITY);
    }

    #[test]
    fn pret_same_arrival_is_zero() {
        let ctx = center_ctx();
        let s = scene(alloc::vec![
            ActorState::new(1, 0.0, Vec2::new(0.0, -30.0), Vec2::new(0.0, 10.0)),
            ActorState::new(2, 0.0, Vec2::new(-30.0, 0.0), Vec2::new(10.0, 0.0)),
        ]);
        assert!(pret(&ctx, &s, ActorId(1), ActorId(2)).unwrap().abs() < 1e-12);
    }

    #[test]
    fn pret_footprint_crossing() {
        let ctx = MetricContext { contact: ContactConfig::footprint(), ..center_ctx() };
        // A1 overlaps A2's lane on (3.7, 4.3), A2 overlaps A1's lane on (2.7, 3.3)
        let v = pret(&ctx, &crossing(), ActorId(1), ActorId(2)).unwrap();
        assert!((v - 0.4).abs() < 1e-3, "{v}");
    }

    #[test]
    fn msd_and_psd() {
        let ctx = center_ctx();
        let s = scene(alloc::vec![ActorState::new(1, 0.0, Vec2::ZERO, Vec2::new(20.0, 0.0))])
            .with_conflict_area(ConflictArea::rect(1, 50.0, -2.0, 60.0, 2.0).unwrap())
            .with_conflict_area(ConflictArea::rect(2, 25.0, -2.0, 30.0, 2.0).unwrap());
        assert_eq!(msd(&s, ActorId(1)).unwrap(), 25.0);
        assert!((psd(&ctx, &s, ActorId(1), 1).unwrap() - 2.0).abs() < 1e-12);
        assert!((psd(&ctx, &s, ActorId(1), 2).unwrap() - 1.0).abs() < 1e-12);
        let still = scene(alloc::vec![ActorState::new(1, 0.0, Vec2::ZERO, Vec2::ZERO)])
            .with_conflict_area(ConflictArea::rect(1, 50.0, -2.0, 60.0, 2.0).unwrap());
        assert_eq!(psd(&ctx, &still, ActorId(1), 1).unwrap(), f64::INFINITY);
    }

    #[test]
    fn jerk_examples() {
        let mk = |j: Vec2, yaw: f64| scene(alloc::vec![ActorState::new(1, 0.0, Vec2::ZERO, Vec2::ZERO).with_yaw(yaw).with_jerk(j)]);
        assert_eq!(jerk(&mk(Vec2::new(3.0, 0.0), 0.0), ActorId(1)).unwrap(), (0.0, 3.0));
        assert_eq!(jerk(&mk(Vec2::ZERO, 0.0), ActorId(1)).unwrap(), (0.0, 0.0));
        let (lat, long) = jerk(&mk(Vec2::new(1.0, 1.0), core::f64::consts::FRAC_PI_4), ActorId(1)).unwrap();
        assert!(lat.abs() < 1e-12 && (long - 2f64.sqrt()).abs() < 1e-12);
        let none = scene(alloc::vec![ActorState::new(1, 0.0, Vec2::ZERO, Vec2::ZERO)]);
        assert_eq!(jerk(&none, ActorId(1)), Err(Error::MissingJerk(ActorId(1))));
    }
}
