//! Conflict-area based scenario metrics: encroachment times, space occupancy
//! and the pedestrian risk index.

use alloc::vec::Vec;
use core::fmt::Debug;

#[allow(unused_imports)] // float methods come from std when it is linked
use num_traits::Float;

use crate::contact::DistanceMode;
use crate::error::{Error, Result};
use crate::geometry::{signed_distance_point_polygon, signed_separation, wrap_angle, Shape, Vec2};
use crate::search::bisect;
use crate::scene::{actor_polygon_distance, tto, MetricContext, Target};
use crate::types::{ActorId, ActorState, Flag, Flagged, Scenario};

/// Signed separation of an actor from a polygon, negative while occupying it.
fn occupancy(a: &ActorState, polygon: &[Vec2], mode: DistanceMode) -> f64 {
    match mode {
        DistanceMode::Center => signed_distance_point_polygon(a.position, polygon),
        DistanceMode::Footprint => {
            signed_separation(&Shape::Polygon(a.footprint().polygon()), &Shape::Polygon(polygon.to_vec()))
        }
    }
}

/// Entry and exit times of an actor in a conflict area. Between the
/// bracketing samples the actor moves linearly and turns with the shorter
/// heading change. The exit is `None` if the actor is still inside at the
/// end of the scenario.
pub fn occupancy_interval(
    ctx: &MetricContext,
    scenario: &Scenario,
    actor: ActorId,
    ca: u32,
) -> Result<Option<(f64, Option<f64>)>> {
    let mut polygon = None;
    let mut samples: Vec<(f64, &ActorState)> = Vec::new();
    for s in &scenario.scenes {
        let area = s.conflict_area(ca)?;
        polygon.get_or_insert_with(|| area.polygon.clone());
        if let Ok(a) = s.actor(actor) {
            samples.push((s.t, a));
        }
    }
    let Some(poly) = polygon else { return Ok(None) };
    let mode = ctx.mode();
    let inside = |a: &ActorState| occupancy(a, &poly, mode) < 0.0;
    // first time in `(t0, t1]` at which the actor is inside iff `to_inside`
    let crossing = |(t0, a0): (f64, &ActorState), (t1, a1): (f64, &ActorState), to_inside: bool| {
        let at = |t: f64| {
            let s = (t - t0) / (t1 - t0);
            let mut a = a0.clone();
            a.position = a0.position.lerp(a1.position, s);
            a.yaw = a0.yaw + wrap_angle(a1.yaw - a0.yaw) * s;
            a
        };
        bisect(t0, t1, CROSSING_RESOLUTION, |t| inside(&at(t)) != to_inside).1
    };
    let Some(first_in) = samples.iter().position(|s| inside(s.1)) else {
        return Ok(None);
    };
    let entry = if first_in == 0 { samples[0].0 } else { crossing(samples[first_in - 1], samples[first_in], true) };
    let exit = samples[first_in..]
        .iter()
        .position(|s| !inside(s.1))
        .map(|k| crossing(samples[first_in + k - 1], samples[first_in + k], false));
    Ok(Some((entry, exit)))
}

const CROSSING_RESOLUTION: f64 = 1e-12;

/// Encroachment time: how long A1 occupies the conflict area.
pub fn et(ctx: &MetricContext, scenario: &Scenario, a1: ActorId, ca: u32) -> Result<f64> {
    match occupancy_interval(ctx, scenario, a1, ca)? {
        Some((entry, Some(exit))) => Ok(exit - entry),
        _ => Err(Error::NoEncroachment),
    }
}

/// Post encroachment time: A2's entry minus A1's exit. Overlapping
/// occupancy gives 0 flagged [`Flag::Overlap`].
pub fn pet(ctx: &MetricContext, scenario: &Scenario, a1: ActorId, a2: ActorId, ca: u32) -> Result<Flagged<f64>> {
    let (exit1, entry2) = pet_events(ctx, scenario, a1, a2, ca)?;
    Ok(post_encroachment(exit1, entry2))
}

/// A1's exit time and A2's entry time.
pub fn pet_events(ctx: &MetricContext, scenario: &Scenario, a1: ActorId, a2: ActorId, ca: u32) -> Result<(f64, f64)> {
    let exit1 = match occupancy_interval(ctx, scenario, a1, ca)? {
        Some((_, Some(exit))) => exit,
        _ => return Err(Error::NoEncroachment),
    };
    let entry2 = occupancy_interval(ctx, scenario, a2, ca)?.ok_or(Error::NoEncroachment)?.0;
    Ok((exit1, entry2))
}

pub fn post_encroachment(exit1: f64, entry2: f64) -> Flagged<f64> {
    if entry2 < exit1 {
        Flagged::flagged(0.0, Flag::Overlap)
    } else {
        Flagged::plain(entry2 - exit1)
    }
}

/// Personal space of an actor.
pub trait PersonalSpace: Debug {
    fn space(&self, actor: &ActorState) -> Vec<Vec2>;
}

/// The footprint inflated by margins in front, behind and to each side.
#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(default))]
pub struct InflatedFootprint {
    pub front: f64,
    pub rear: f64,
    pub side: f64,
}

impl Default for InflatedFootprint {
    fn default() -> Self {
        InflatedFootprint { front: 1.0, rear: 0.5, side: 0.5 }
    }
}

impl PersonalSpace for InflatedFootprint {
    fn space(&self, actor: &ActorState) -> Vec<Vec2> {
        actor.footprint().inflate(self.front, self.rear, self.side).polygon()
    }
}

/// Space occupancy index: over all samples, the number of other actors whose
/// personal space overlaps A1's.
pub fn soi(scenario: &Scenario, a1: ActorId, space: &dyn PersonalSpace) -> Result<f64> {
    let mut count = 0usize;
    let mut seen = false;
    for s in &scenario.scenes {
        let Ok(ego) = s.actor(a1) else { continue };
        seen = true;
        let mine = Shape::Polygon(space.space(ego));
        count += s
            .others(a1)
            .filter(|o| signed_separation(&mine, &Shape::Polygon(space.space(o))) < 0.0)
            .count();
    }
    if !seen {
        return Err(Error::MissingActor(a1));
    }
    Ok(count as f64)
}

/// Time A1 needs to stop including its reaction time, `t_r + v_long / |a_long_min|`.
pub fn stopping_time(a: &ActorState) -> f64 {
    a.reaction_time.unwrap_or(0.0) + a.v_long().max(0.0) / a.capabilities.a_long_min.abs()
}

/// Estimated impact speed on reaching the conflict area at distance `d`
/// after the reaction time; 0 when A1 can stop before it.
pub fn impact_speed(a: &ActorState, d: f64) -> f64 {
    let v = a.speed();
    let t_r = a.reaction_time.unwrap_or(0.0);
    let r = v * v + 2.0 * a.capabilities.a_long_min * (d - v * t_r);
    if r > 0.0 {
        r.sqrt()
    } else {
        0.0
    }
}

/// Pedestrian risk index: integral of `s_imp² (t_s − TTZ_A1)` over the
/// conflict period where `TTZ_P < TTZ_A1 < t_s`.
///
/// Returns 0 flagged [`Flag::NoConflictPeriod`] without a conflict period and
/// an error when the conflict period is not contiguous.
pub fn pri(ctx: &MetricContext, scenario: &Scenario, a1: ActorId, ca: u32, pedestrian: ActorId) -> Result<Flagged<f64>> {
    let mut points: Vec<(f64, Option<f64>)> = Vec::new();
    for s in &scenario.scenes {
        let (Ok(a), Ok(_)) = (s.actor(a1), s.actor(pedestrian)) else { continue };
        let ttz_a = tto(ctx, s, a1, Target::ConflictArea(ca))?;
        let ttz_p = tto(ctx, s, pedestrian, Target::ConflictArea(ca))?;
        let t_s = stopping_time(a);
        let value = (ttz_p < ttz_a && ttz_a < t_s).then(|| {
            let d = actor_polygon_distance(a, &s.conflict_area(ca).map(|c| c.polygon.clone()).unwrap_or_default(), ctx.mode());
            impact_speed(a, d).powi(2) * (t_s - ttz_a)
        });
        points.push((s.t, value));
    }
    let runs = points.windows(2).filter(|w| w[0].1.is_none() && w[1].1.is_some()).count()
        + usize::from(points.first().is_some_and(|p| p.1.is_some()));
    match runs {
        0 => return Ok(Flagged::flagged(0.0, Flag::NoConflictPeriod)),
        1 => {}
        _ => return Err(Error::IncoherentConflictPeriod),
    }
    let integral = points
        .windows(2)
        .filter_map(|w| match (w[0].1, w[1].1) {
            (Some(v0), Some(v1)) => Some(0.5 * (v0 + v1) * (w[1].0 - w[0].0)),
            _ => None,
        })
        .sum();
    Ok(Flagged::plain(integral))
}
