//! Time to maneuver and time to react.

use crate::error::{Error, Result};
use crate::models::ManeuverModel;
use crate::scene::MetricContext;
use crate::types::{ActorId, Flag, Flagged, Scene};

/// Latest start offset in `[0, TTC]` at which `maneuver` by A1 avoids
/// contact with A2's nominal prediction; `-inf` if even an immediate
/// maneuver collides and `+inf` (flagged) if no collision is predicted.
pub fn ttm(ctx: &MetricContext, scene: &Scene, a1: ActorId, a2: ActorId, maneuver: &ManeuverModel) -> Result<Flagged<f64>> {
    let (s1, s2) = (scene.actor(a1)?, scene.actor(a2)?);
    let t2 = ctx.predict(s2)?;
    let t_c = ctx.contact_time(s1, &ctx.predict(s1)?, s2, &t2);
    if t_c.is_infinite() {
        return Ok(Flagged::flagged(f64::INFINITY, Flag::NoPredictedCollision));
    }
    let avoids = |start: f64| -> Result<bool> {
        let tr = maneuver.generate(s1, start, &ctx.predictor)?;
        Ok(!ctx.collides(s1, &tr, s2, &t2))
    };
    if !avoids(0.0)? {
        return Ok(Flagged::plain(f64::NEG_INFINITY));
    }
    if t_c == 0.0 {
        return Ok(Flagged::plain(0.0));
    }
    let mut err = None;
    let (good, _) = crate::search::bisect(0.0, t_c, ctx.search.resolution, |s| match avoids(s) {
        Ok(ok) => ok,
        Err(e) => {
            err = Some(e);
            false
        }
    });
    match err {
        Some(e) => Err(e),
        None => Ok(Flagged::plain(good)),
    }
}

/// Maximum TTM over a set of maneuvers.
pub fn ttr(ctx: &MetricContext, scene: &Scene, a1: ActorId, a2: ActorId, maneuvers: &[ManeuverModel]) -> Result<Flagged<f64>> {
    let mut best: Option<Flagged<f64>> = None;
    for m in maneuvers {
        let v = ttm(ctx, scene, a1, a2, m)?;
        if best.as_ref().is_none_or(|b| v.value > b.value) {
            best = Some(v);
        }
    }
    best.ok_or(Error::EmptyManeuverSet)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Vec2;
    use crate::types::ActorState;
    use alloc::vec;

    /// A1 at 20 m/s behind a stationary A2 with the given bumper gap.
    fn approach(gap: f64) -> Scene {
        Scene::new(
            0.0,
            vec![
                ActorState::new(1, 0.0, Vec2::ZERO, Vec2::new(20.0, 0.0)),
                ActorState::new(2, 0.0, Vec2::new(gap + 4.0, 0.0), Vec2::ZERO),
            ],
        )
        .unwrap()
    }

    #[test]
    fn time_to_brake_examples() {
        let ctx = MetricContext::default();
        let b = ManeuverModel::brake();
        let v = ttm(&ctx, &approach(50.0), ActorId(1), ActorId(2), &b).unwrap();
        assert!((v.value - 1.25).abs() <= 1e-3, "{v:?}");
        let v = ttm(&ctx, &approach(25.0), ActorId(1), ActorId(2), &b).unwrap();
        assert_eq!(v.value, 0.0);
        let v = ttm(&ctx, &approach(20.0), ActorId(1), ActorId(2), &b).unwrap();
        assert_eq!(v.value, f64::NEG_INFINITY);
    }

    #[test]
    fn no_collision_is_flagged() {
        let ctx = MetricContext::default();
        let s = Scene::new(
            0.0,
            vec![
                ActorState::new(1, 0.0, Vec2::ZERO, Vec2::new(10.0, 0.0)),
                ActorState::new(2, 0.0, Vec2::new(50.0, 0.0), Vec2::new(20.0, 0.0)),
            ],
        )
        .unwrap();
        let v = ttm(&ctx, &s, ActorId(1), ActorId(2), &ManeuverModel::brake()).unwrap();
        assert_eq!(v, Flagged::flagged(f64::INFINITY, Flag::NoPredictedCollision));
    }

    #[test]
    fn ttr_is_maximum() {
        let ctx = MetricContext::default();
        let s = approach(50.0);
        let ms = [ManeuverModel::brake(), ManeuverModel::Brake { deceleration: Some(6.0) }];
        let r = ttr(&ctx, &s, ActorId(1), ActorId(2), &ms).unwrap();
        let single = ttm(&ctx, &s, ActorId(1), ActorId(2), &ms[0]).unwrap();
        assert_eq!(r, single);
        assert_eq!(ttr(&ctx, &s, ActorId(1), ActorId(2), &[]), Err(Error::EmptyManeuverSet));
    }
}
