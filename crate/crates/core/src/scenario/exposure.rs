//! TTC-based scenario metrics: time exposed, time integrated and time to accident.

use core::fmt::Debug;

use crate::error::{Error, Result};
use crate::scenario::TimeSeries;
use crate::scene::{ttc, MetricContext};
use crate::types::{ActorId, Scenario};

/// Time during which the interpolated series is at or below `tau`.
pub fn time_exposed(series: &TimeSeries, tau: f64) -> f64 {
    series.integrate_with(
        |v0, v1, dt| {
            match (v0 <= tau, v1 <= tau) {
                (true, true) => dt,
                (false, false) => 0.0,
                // fraction of the segment on the low side of the crossing
                (true, false) => dt * (tau - v0) / (v1 - v0),
                (false, true) => dt * (tau - v1) / (v0 - v1),
            }
        },
        |v, h| if v <= tau { h } else { 0.0 },
    )
}

/// Integral of `max(0, tau − value)` over the interpolated series.
pub fn time_integrated(series: &TimeSeries, tau: f64) -> f64 {
    series.integrate_with(
        |v0, v1, dt| {
            let (e0, e1) = (tau - v0, tau - v1);
            match (e0 >= 0.0, e1 >= 0.0) {
                (true, true) => 0.5 * (e0 + e1) * dt,
                (false, false) => 0.0,
                (true, false) => 0.5 * e0 * dt * e0 / (e0 - e1),
                (false, true) => 0.5 * e1 * dt * e1 / (e1 - e0),
            }
        },
        |v, h| if v <= tau { (tau - v) * h } else { 0.0 },
    )
}

fn ttc_series(ctx: &MetricContext, scenario: &Scenario, a1: ActorId, a2: ActorId) -> Result<TimeSeries> {
    TimeSeries::over_actors(scenario, &[a1, a2], |s| ttc(ctx, s, a1, a2))
}

fn check_tau(tau: f64) -> Result<()> {
    if tau > 0.0 && tau.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParameter("target value must be positive".into()))
    }
}

/// Time exposed TTC: time with TTC at or below `tau`.
pub fn tet(ctx: &MetricContext, scenario: &Scenario, a1: ActorId, a2: ActorId, tau: f64) -> Result<f64> {
    check_tau(tau)?;
    Ok(time_exposed(&ttc_series(ctx, scenario, a1, a2)?, tau))
}

/// Time integrated TTC: integral of `tau − TTC` while TTC is at or below `tau`.
pub fn tit(ctx: &MetricContext, scenario: &Scenario, a1: ActorId, a2: ActorId, tau: f64) -> Result<f64> {
    check_tau(tau)?;
    Ok(time_integrated(&ttc_series(ctx, scenario, a1, a2)?, tau))
}

/// Locates the first evasive maneuver of an actor.
pub trait EvasiveDetector: Debug {
    /// Index of the first scene showing an evasive maneuver by `actor`.
    fn detect(&self, scenario: &Scenario, actor: ActorId) -> Option<usize>;
}

/// Fires at the first sample with hard braking or abrupt lateral jerk.
#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(default))]
pub struct ThresholdDetector {
    /// Longitudinal acceleration at or below which braking counts as evasive.
    pub a_long: f64,
    /// Lateral jerk magnitude at or above which steering counts as evasive.
    pub lat_jerk: f64,
}

impl Default for ThresholdDetector {
    fn default() -> Self {
        ThresholdDetector { a_long: -4.0, lat_jerk: 5.0 }
    }
}

impl EvasiveDetector for ThresholdDetector {
    fn detect(&self, scenario: &Scenario, actor: ActorId) -> Option<usize> {
        scenario.scenes.iter().position(|s| {
            s.actor(actor).is_ok_and(|a| {
                let jerk = a.jerk.map_or(0.0, |j| crate::geometry::longitudinal_lateral_decompose(j, a.yaw).1);
                a.a_long() <= self.a_long || jerk.abs() >= self.lat_jerk
            })
        })
    }
}

/// Scene index of the first evasive maneuver by A1 at which A2 is present.
pub fn evasive_index(scenario: &Scenario, a1: ActorId, a2: ActorId, detector: &dyn EvasiveDetector) -> Result<usize> {
    let i = detector.detect(scenario, a1).ok_or(Error::NoEvasiveEvent)?;
    scenario.scenes.get(i).ok_or(Error::NoEvasiveEvent)?.actor(a2)?;
    Ok(i)
}

/// Time to accident: the TTC at the first evasive maneuver of A1.
pub fn tta(ctx: &MetricContext, scenario: &Scenario, a1: ActorId, a2: ActorId, detector: &dyn EvasiveDetector) -> Result<f64> {
    let i = evasive_index(scenario, a1, a2, detector)?;
    ttc(ctx, &scenario.scenes[i], a1, a2)
}
