use approx::assert_abs_diff_eq;
use criticality::scenario::{aggregate_time, et, pet, pri, Aggregate, TimeSeries};
use criticality::scene::MetricContext;
use criticality::types::{ActorId, ActorState, ConflictArea, Flag, Scenario, Scene};
use criticality::{ContactConfig, Predictor, Vec2};
use proptest::prelude::*;

const A1: ActorId = ActorId(1);
const A2: ActorId = ActorId(2);

fn center() -> MetricContext {
    MetricContext::new(Predictor::default(), ContactConfig::center())
}

fn series() -> impl Strategy<Value = TimeSeries> {
    prop::collection::vec((0.01..2.0f64, -50.0..50.0f64), 1..40).prop_map(|steps| {
        let mut t = 0.0;
        let samples = steps
            .into_iter()
            .map(|(dt, v)| {
                t += dt;
                (t, v)
            })
            .collect();
        TimeSeries::new(samples).unwrap()
    })
}

proptest! {
    #[test]
    fn aggregates_are_ordered(s in series()) {
        let get = |a| aggregate_time(&s, a).unwrap();
        let (lo, hi) = (get(Aggregate::Min), get(Aggregate::Max));
        for a in [Aggregate::Mean, Aggregate::Median, Aggregate::Quantile { p: 0.3 }] {
            let v = get(a);
            prop_assert!(lo - 1e-9 <= v && v <= hi + 1e-9, "{a:?} {v} outside [{lo}, {hi}]");
        }
        let q = |p| get(Aggregate::Quantile { p });
        prop_assert!(q(0.2) <= q(0.8));
        prop_assert_eq!(q(0.0), lo);
        prop_assert_eq!(q(1.0), hi);
    }

    #[test]
    fn integral_of_constant(c in -10.0..10.0f64, s in series()) {
        let flat = TimeSeries::new(s.samples().iter().map(|(t, _)| (*t, c)).collect()).unwrap();
        prop_assert!((aggregate_time(&flat, Aggregate::Integral).unwrap() - c * flat.duration()).abs() < 1e-9);
    }

    /// A1 along x and A2 along y at constant speeds through a rectangular
    /// conflict area; in center mode the times follow from the edges.
    #[test]
    fn encroachment_times_on_crossing(v1 in 2.0..15.0f64, v2 in 2.0..15.0f64, w in 1.0..6.0f64, x0 in 5.0..30.0f64, y0 in 5.0..60.0f64) {
        let dt = 0.05;
        let end = ((x0 + w) / v1).max((y0 + w) / v2) + 1.0;
        let scenes = (0..=(end / dt).ceil() as usize)
            .map(|k| {
                let t = k as f64 * dt;
                Scene::new(t, vec![
                    ActorState::new(1, t, Vec2::new(-x0 + v1 * t, w / 2.0), Vec2::new(v1, 0.0)),
                    ActorState::new(2, t, Vec2::new(w / 2.0, -y0 + v2 * t), Vec2::new(0.0, v2)),
                ])
                .unwrap()
                .with_conflict_area(ConflictArea::rect(1, 0.0, 0.0, w, w).unwrap())
            })
            .collect();
        let sc = Scenario::new(scenes).unwrap();
        let ctx = center();
        prop_assert!((et(&ctx, &sc, A1, 1).unwrap() - w / v1).abs() < 1e-9);
        let p = pet(&ctx, &sc, A1, A2, 1).unwrap();
        let raw = y0 / v2 - (x0 + w) / v1;
        if raw >= 0.0 {
            prop_assert!((p.value - raw).abs() < 1e-9 && p.flag.is_none(), "{p:?} vs {raw}");
        } else {
            prop_assert_eq!(p.flag, Some(Flag::Overlap));
        }
    }
}

/// The same relative configuration at every sample: A1 at 20 m/s with a 1 s
/// reaction time, 30 m before the conflict area, and a pedestrian about to enter it.
#[test]
fn pri_with_constant_integrand() {
    let scenes = (0..=20)
        .map(|k| {
            let t = k as f64 * 0.1;
            Scene::new(
                t,
                vec![
                    ActorState::new(1, t, Vec2::ZERO, Vec2::new(20.0, 0.0)).with_reaction_time(1.0),
                    ActorState::new(2, t, Vec2::new(32.0, 3.0), Vec2::new(0.0, -1.5)),
                ],
            )
            .unwrap()
            .with_conflict_area(ConflictArea::rect(1, 30.0, -2.0, 34.0, 2.0).unwrap())
        })
        .collect();
    let sc = Scenario::new(scenes).unwrap();
    // impact speed² = 400 − 16 (30 − 20) = 240, stopping time 3.5 s, TTZ 1.5 s
    let v = pri(&center(), &sc, A1, 1, A2).unwrap();
    assert!(v.flag.is_none());
    assert_abs_diff_eq!(v.value, 240.0 * 2.0 * 2.0, epsilon = 1e-3);
}
