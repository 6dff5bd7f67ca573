//! Severity and probability metrics over a scenario.

#[allow(unused_imports)] // float methods come from std when it is linked
use num_traits::Float;

use crate::error::{Error, Result};
use crate::geometry::{signed_separation, Shape, Vec2};
use crate::scenario::encroachment::pet_events;
use crate::scenario::exposure::{evasive_index, EvasiveDetector};
use crate::scenario::TimeSeries;
use crate::scene::{a_long_req, ttc, MetricContext};
use crate::stats::Distribution;
use crate::types::{AccidentEvent, ActorId, ActorState, Flag, Flagged, Scenario, Scene};

/// Speed change constant of the fatality model, m/s.
pub const JOKSCH_REFERENCE: f64 = 31.74;

/// Time-normalized trapezoidal mean of a probability series.
pub fn cpi_from_series(p: &TimeSeries) -> Result<f64> {
    let d = p.duration();
    if !(d > 0.0) {
        return Err(Error::ZeroDuration);
    }
    Ok((p.trapezoid().0 / d).clamp(0.0, 1.0))
}

/// Crash potential index: mean over time of the probability that the
/// braking capability `A` of A1 falls short of the required deceleration,
/// `P(a_long_req < A)`.
pub fn cpi(ctx: &MetricContext, scenario: &Scenario, a1: ActorId, a2: ActorId, capability: &Distribution) -> Result<f64> {
    capability.validate()?;
    let series = TimeSeries::over_actors(scenario, &[a1, a2], |s| {
        Ok(capability.sf(a_long_req(ctx, s, a1, a2)?.value))
    })?;
    cpi_from_series(&series)
}

/// Crash index from the kinetic energy loss `dk` and the post encroachment time.
pub fn crash_index(alpha: f64, beta: f64, dk: f64, pet: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&alpha) || !(beta > 0.0) {
        return Err(Error::InvalidParameter("crash index needs alpha in [0, 1] and beta > 0".into()));
    }
    Ok(alpha * dk / (beta * pet).exp())
}

/// Kinetic energy lost in a perfectly inelastic collision of two bodies.
pub fn inelastic_energy_loss(m1: f64, v1: Vec2, m2: f64, v2: Vec2) -> f64 {
    0.5 * m1 * m2 / (m1 + m2) * (v1 - v2).norm_squared()
}

/// Velocity of an actor at `t`, interpolated between its samples and held
/// constant outside them.
fn velocity_at(scenario: &Scenario, actor: ActorId, t: f64) -> Result<Vec2> {
    let track = scenario.track(actor);
    let first = track.first().ok_or(Error::MissingActor(actor))?;
    if t <= first.t {
        return Ok(first.velocity);
    }
    for w in track.windows(2) {
        if t <= w[1].t {
            let s = (t - w[0].t) / (w[1].t - w[0].t);
            return Ok(w[0].velocity.lerp(w[1].velocity, s));
        }
    }
    Ok(track[track.len() - 1].velocity)
}

fn mass(scenario: &Scenario, actor: ActorId) -> Result<f64> {
    scenario.track(actor).iter().find_map(|a| a.mass).ok_or(Error::MissingMass(actor))
}

/// Crash index `α ΔK / e^{β PET}` with ΔK from a hypothetical inelastic
/// collision between A1 at its exit from the conflict area and A2 at its entry.
pub fn ci(ctx: &MetricContext, scenario: &Scenario, a1: ActorId, a2: ActorId, ca: u32, alpha: f64, beta: f64) -> Result<Flagged<f64>> {
    let (m1, m2) = (mass(scenario, a1)?, mass(scenario, a2)?);
    let (exit1, entry2) = pet_events(ctx, scenario, a1, a2, ca)?;
    let pet = crate::scenario::encroachment::post_encroachment(exit1, entry2);
    let dk = inelastic_energy_loss(m1, velocity_at(scenario, a1, exit1)?, m2, velocity_at(scenario, a2, entry2)?);
    Ok(Flagged { value: crash_index(alpha, beta, dk, pet.value)?, flag: pet.flag })
}

/// Accident metric: 1 if an accident is recorded or two footprints overlap
/// in any scene, else 0.
pub fn am(scenario: &Scenario) -> f64 {
    let overlap = |s: &Scene| {
        s.actors.iter().enumerate().any(|(i, a)| {
            let pa = Shape::Polygon(a.footprint().polygon());
            s.actors[i + 1..]
                .iter()
                .any(|b| signed_separation(&pa, &Shape::Polygon(b.footprint().polygon())) < 0.0)
        })
    };
    if !scenario.accident_events.is_empty() || scenario.scenes.iter().any(overlap) {
        1.0
    } else {
        0.0
    }
}

/// Speed change of A1 in a recorded accident, post minus pre collision speed.
pub fn delta_v_event(event: &AccidentEvent, a1: ActorId) -> Result<f64> {
    let (pre, post) = event.pre_speeds.zip(event.post_speeds).ok_or(Error::MissingSpeeds)?;
    if a1 == event.actors.0 {
        Ok(post.0 - pre.0)
    } else if a1 == event.actors.1 {
        Ok(post.1 - pre.1)
    } else {
        Err(Error::MissingActor(a1))
    }
}

/// Speed change of A1 in a collision with A2, `m2 / (m1 + m2) (|v2| − |v1|)`.
pub fn delta_v_mass(m1: f64, v1: f64, m2: f64, v2: f64) -> Result<f64> {
    if !(m1 > 0.0 && m2 > 0.0) {
        return Err(Error::InvalidParameter("masses must be positive".into()));
    }
    Ok(m2 / (m1 + m2) * (v2 - v1))
}

fn masses(a: &ActorState, b: &ActorState) -> Result<(f64, f64)> {
    Ok((a.mass.ok_or(Error::MissingMass(a.id))?, b.mass.ok_or(Error::MissingMass(b.id))?))
}

/// [`delta_v_mass`] with the masses and speeds of a scene.
pub fn delta_v(scene: &Scene, a1: ActorId, a2: ActorId) -> Result<f64> {
    let (s1, s2) = (scene.actor(a1)?, scene.actor(a2)?);
    let (m1, m2) = masses(s1, s2)?;
    delta_v_mass(m1, s1.speed(), m2, s2.speed())
}

/// Fatality probability `(|Δv| / 31.74)^4`, clamped to 1.
pub fn joksch_fatality(dv: f64) -> f64 {
    (dv.abs() / JOKSCH_REFERENCE).powi(4).min(1.0)
}

/// Conflict severity `Δv − TTA |a1| m2 / (m1 + m2)` evaluated at the first
/// evasive maneuver of A1.
///
/// Without a predicted collision TTA is infinite; the result is then Δv
/// flagged [`Flag::NoPredictedCollision`].
pub fn cs(ctx: &MetricContext, scenario: &Scenario, a1: ActorId, a2: ActorId, detector: &dyn EvasiveDetector) -> Result<Flagged<f64>> {
    let i = evasive_index(scenario, a1, a2, detector)?;
    let scene = &scenario.scenes[i];
    let dv = delta_v(scene, a1, a2)?;
    let tta = ttc(ctx, scene, a1, a2)?;
    if tta.is_infinite() {
        return Ok(Flagged::flagged(dv, Flag::NoPredictedCollision));
    }
    let (s1, s2) = (scene.actor(a1)?, scene.actor(a2)?);
    let (m1, m2) = masses(s1, s2)?;
    Ok(Flagged::plain(conflict_severity(dv, tta, s1.acceleration.norm(), m1, m2)))
}

pub fn conflict_severity(dv: f64, tta: f64, a1: f64, m1: f64, m2: f64) -> f64 {
    dv - tta * a1 * m2 / (m1 + m2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;
    use alloc::vec::Vec;

    #[test]
    fn joksch_values() {
        assert_eq!(joksch_fatality(31.74), 1.0);
        assert_eq!(joksch_fatality(-15.87), 0.0625);
        assert_eq!(joksch_fatality(0.0), 0.0);
        assert_eq!(joksch_fatality(100.0), 1.0);
    }

    #[test]
    fn delta_v_examples() {
        let dv = delta_v_mass(1000.0, 20.0, 2000.0, 10.0).unwrap();
        assert!((dv + 20.0 / 3.0).abs() < 1e-12);
        assert_eq!(delta_v_mass(1000.0, 5.0, 2000.0, 5.0).unwrap(), 0.0);
        let e = AccidentEvent {
            t: 1.0,
            actors: (ActorId(1), ActorId(2)),
            pre_speeds: Some((20.0, 0.0)),
            post_speeds: Some((8.0, 6.0)),
            masses: None,
        };
        assert_eq!(delta_v_event(&e, ActorId(1)).unwrap(), -12.0);
        assert_eq!(delta_v_event(&e, ActorId(2)).unwrap(), 6.0);
        assert_eq!(delta_v_event(&AccidentEvent { post_speeds: None, ..e }, ActorId(1)), Err(Error::MissingSpeeds));
    }

    #[test]
    fn conflict_severity_example() {
        let dv = -20.0 / 3.0;
        assert!((conflict_severity(dv, 2.0, 5.0, 1000.0, 2000.0) + 40.0 / 3.0).abs() < 1e-12);
        assert_eq!(conflict_severity(dv, 0.0, 5.0, 1000.0, 2000.0), dv);
        assert_eq!(conflict_severity(dv, 2.0, 0.0, 1000.0, 2000.0), dv);
    }

    #[test]
    fn crash_index_examples() {
        let v = crash_index(0.5, 1.0, 1e5, 2.0).unwrap();
        assert!((v - 0.5e5 / core::f64::consts::E.powi(2)).abs() < 1e-9);
        assert_eq!(crash_index(0.0, 1.0, 1e5, 2.0).unwrap(), 0.0);
        let scan: Vec<f64> = [1.0, 2.0, 4.0].iter().map(|b| crash_index(0.5, *b, 1e5, 2.0).unwrap()).collect();
        assert!(scan[0] > scan[1] && scan[1] > scan[2]);
        assert!(crash_index(1.5, 1.0, 1.0, 1.0).is_err());
    }

    #[test]
    fn inelastic_loss_head_on() {
        // equal masses, opposite 10 m/s: all kinetic energy is lost
        let dk = inelastic_energy_loss(1000.0, Vec2::new(10.0, 0.0), 1000.0, Vec2::new(-10.0, 0.0));
        assert!((dk - 1e5).abs() < 1e-9);
    }

    #[test]
    fn cpi_constant_probability() {
        let s = TimeSeries::new(vec![(0.0, 0.3), (1.0, 0.3), (5.0, 0.3)]).unwrap();
        assert!((cpi_from_series(&s).unwrap() - 0.3).abs() < 1e-15);
        let one = TimeSeries::new(vec![(0.0, 0.3)]).unwrap();
        assert_eq!(cpi_from_series(&one), Err(Error::ZeroDuration));
    }

    #[test]
    fn am_detects_overlap() {
        let scene = |x: f64, t: f64| {
            Scene::new(
                t,
                vec![
                    ActorState::new(1, t, Vec2::ZERO, Vec2::ZERO),
                    ActorState::new(2, t, Vec2::new(x, 0.0), Vec2::ZERO),
                ],
            )
            .unwrap()
        };
        let clear = Scenario::new(vec![scene(10.0, 0.0), scene(10.0, 1.0)]).unwrap();
        assert_eq!(am(&clear), 0.0);
        let hit = Scenario::new(vec![scene(10.0, 0.0), scene(3.0, 1.0), scene(10.0, 2.0)]).unwrap();
        assert_eq!(am(&hit), 1.0);
        let event = clear.with_accident_event(AccidentEvent {
            t: 0.5,
            actors: (ActorId(1), ActorId(2)),
            pre_speeds: None,
            post_speeds: None,
            masses: None,
        });
        assert_eq!(am(&event), 1.0);
    }
}
