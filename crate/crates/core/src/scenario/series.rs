//! Time series of metric values and aggregation over time and actors.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::types::{ActorId, Scenario, Scene};

/// Samples `(t, value)` with strictly increasing `t`; values may be `±inf`.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct TimeSeries {
    samples: Vec<(f64, f64)>,
}

impl TimeSeries {
    pub fn new(samples: Vec<(f64, f64)>) -> Result<Self> {
        if samples.iter().any(|(t, v)| !t.is_finite() || v.is_nan()) {
            return Err(Error::NonFinite);
        }
        if samples.windows(2).any(|w| !(w[1].0 > w[0].0)) {
            return Err(Error::InvalidParameter("series times must be strictly increasing".into()));
        }
        Ok(TimeSeries { samples })
    }

    /// Evaluates `f` on every scene of the scenario.
    pub fn from_scenario(scenario: &Scenario, mut f: impl FnMut(&Scene) -> Result<f64>) -> Result<Self> {
        let samples = scenario.scenes.iter().map(|s| Ok((s.t, f(s)?))).collect::<Result<Vec<_>>>()?;
        TimeSeries::new(samples)
    }

    /// Evaluates `f` on the scenes where all `actors` are present.
    pub fn over_actors(scenario: &Scenario, actors: &[ActorId], mut f: impl FnMut(&Scene) -> Result<f64>) -> Result<Self> {
        let mut samples = Vec::new();
        for s in &scenario.scenes {
            if actors.iter().all(|a| s.actor(*a).is_ok()) {
                samples.push((s.t, f(s)?));
            }
        }
        TimeSeries::new(samples)
    }

    pub fn samples(&self) -> &[(f64, f64)] {
        &self.samples
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn duration(&self) -> f64 {
        match (self.samples.first(), self.samples.last()) {
            (Some(a), Some(b)) => b.0 - a.0,
            _ => 0.0,
        }
    }

    /// Trapezoidal integral and covered duration over the segments whose
    /// endpoints are both finite.
    pub fn trapezoid(&self) -> (f64, f64) {
        let mut integral = 0.0;
        let mut covered = 0.0;
        for w in self.samples.windows(2) {
            let ((t0, v0), (t1, v1)) = (w[0], w[1]);
            if v0.is_finite() && v1.is_finite() {
                integral += 0.5 * (v0 + v1) * (t1 - t0);
                covered += t1 - t0;
            }
        }
        (integral, covered)
    }

    /// Integral of `g` applied to the piecewise-linear interpolant.
    ///
    /// `g_segment(v0, v1, dt)` integrates over one segment with finite ends;
    /// a segment with an infinite end is split at its midpoint and each half
    /// takes its endpoint's value, integrated by `g_const(v, dt)`.
    pub fn integrate_with(
        &self,
        g_segment: impl Fn(f64, f64, f64) -> f64,
        g_const: impl Fn(f64, f64) -> f64,
    ) -> f64 {
        let mut total = 0.0;
        for w in self.samples.windows(2) {
            let ((t0, v0), (t1, v1)) = (w[0], w[1]);
            let dt = t1 - t0;
            if v0.is_finite() && v1.is_finite() {
                total += g_segment(v0, v1, dt);
            } else {
                total += g_const(v0, 0.5 * dt) + g_const(v1, 0.5 * dt);
            }
        }
        total
    }
}

/// Aggregation over time.
#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(tag = "kind", rename_all = "snake_case"))]
pub enum Aggregate {
    Min,
    Max,
    /// Time-weighted (trapezoidal) mean.
    Mean,
    Median,
    Quantile { p: f64 },
    /// Sum of the sample values.
    Sum,
    /// Trapezoidal integral over time.
    Integral,
}

pub fn aggregate_time(series: &TimeSeries, agg: Aggregate) -> Result<f64> {
    if series.is_empty() {
        return Err(Error::EmptySeries);
    }
    let values = || series.samples.iter().map(|s| s.1);
    Ok(match agg {
        Aggregate::Min => values().fold(f64::INFINITY, f64::min),
        Aggregate::Max => values().fold(f64::NEG_INFINITY, f64::max),
        Aggregate::Sum => values().sum(),
        Aggregate::Integral => series.trapezoid().0,
        Aggregate::Mean => {
            let (integral, covered) = series.trapezoid();
            if covered > 0.0 {
                integral / covered
            } else {
                values().sum::<f64>() / series.len() as f64
            }
        }
        Aggregate::Median => quantile(values().collect(), 0.5),
        Aggregate::Quantile { p } => {
            if !(0.0..=1.0).contains(&p) {
                return Err(Error::InvalidParameter("quantile outside [0, 1]".into()));
            }
            quantile(values().collect(), p)
        }
    })
}

/// Linearly interpolated sample quantile.
fn quantile(mut v: Vec<f64>, p: f64) -> f64 {
    v.sort_by(f64::total_cmp);
    let h = p * (v.len() - 1) as f64;
    let lo = h as usize;
    let hi = (lo + 1).min(v.len() - 1);
    let frac = h - lo as f64;
    if frac == 0.0 || v[lo] == v[hi] {
        v[lo]
    } else {
        v[lo] + frac * (v[hi] - v[lo])
    }
}

/// Aggregation of a pairwise metric over actors.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum ActorAggregate {
    /// Maximum over `(subject, other)` pairs.
    DesignatedMax(ActorId),
    /// Mean over all ordered pairs of distinct actors.
    ImpartialMean,
}

pub fn aggregate_actors(
    actors: &[ActorId],
    mode: ActorAggregate,
    mut metric: impl FnMut(ActorId, ActorId) -> Result<f64>,
) -> Result<f64> {
    if actors.len() < 2 {
        return Err(Error::TooFewActors);
    }
    match mode {
        ActorAggregate::DesignatedMax(subject) => {
            if !actors.contains(&subject) {
                return Err(Error::MissingActor(subject));
            }
            let mut best = f64::NEG_INFINITY;
            for &other in actors.iter().filter(|a| **a != subject) {
                best = best.max(metric(subject, other)?);
            }
            Ok(best)
        }
        ActorAggregate::ImpartialMean => {
            let mut sum = 0.0;
            let mut n = 0usize;
            for &a in actors {
                for &b in actors.iter().filter(|b| **b != a) {
                    sum += metric(a, b)?;
                    n += 1;
                }
            }
            Ok(sum / n as f64)
        }
    }
}

/// [`aggregate_actors`] over all actors of a scene.
pub fn aggregate_scene(
    scene: &Scene,
    mode: ActorAggregate,
    metric: impl FnMut(ActorId, ActorId) -> Result<f64>,
) -> Result<f64> {
    let ids: Vec<ActorId> = scene.actors.iter().map(|a| a.id).collect();
    aggregate_actors(&ids, mode, metric)
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn series(s: &[(f64, f64)]) -> TimeSeries {
        TimeSeries::new(s.to_vec()).unwrap()
    }

    #[test]
    fn constant_series() {
        let s = series(&[(0.0, 2.0), (1.0, 2.0), (3.0, 2.0)]);
        for agg in [Aggregate::Min, Aggregate::Max, Aggregate::Mean, Aggregate::Median, Aggregate::Quantile { p: 0.9 }] {
            assert_eq!(aggregate_time(&s, agg).unwrap(), 2.0);
        }
        assert_eq!(aggregate_time(&s, Aggregate::Integral).unwrap(), 6.0);
        assert_eq!(aggregate_time(&s, Aggregate::Sum).unwrap(), 6.0);
    }

    #[test]
    fn aggregate_examples() {
        assert_eq!(aggregate_time(&series(&[(0.0, 1.0), (1.0, 3.0)]), Aggregate::Mean).unwrap(), 2.0);
        let s = series(&[(0.0, 5.0), (1.0, 2.0), (2.0, f64::INFINITY)]);
        assert_eq!(aggregate_time(&s, Aggregate::Min).unwrap(), 2.0);
        assert_eq!(aggregate_time(&s, Aggregate::Median).unwrap(), 5.0);
        assert_eq!(aggregate_time(&TimeSeries::default(), Aggregate::Max), Err(Error::EmptySeries));
    }

    #[test]
    fn rejects_unordered_times() {
        assert!(TimeSeries::new(vec![(1.0, 0.0), (1.0, 1.0)]).is_err());
    }

    #[test]
    fn actor_aggregation() {
        let ids = [ActorId(1), ActorId(2), ActorId(3)];
        let table = |a: ActorId, b: ActorId| -> Result<f64> {
            Ok(match (a.0, b.0) {
                (1, 2) => 0.2,
                (1, 3) => 0.9,
                _ => 1.0,
            })
        };
        assert_eq!(aggregate_actors(&ids, ActorAggregate::DesignatedMax(ActorId(1)), table).unwrap(), 0.9);
        let pair = [ActorId(1), ActorId(2)];
        let v = |a: ActorId, _: ActorId| -> Result<f64> { Ok(if a.0 == 1 { 1.0 } else { 3.0 }) };
        assert_eq!(aggregate_actors(&pair, ActorAggregate::ImpartialMean, v).unwrap(), 2.0);
        assert_eq!(aggregate_actors(&pair, ActorAggregate::DesignatedMax(ActorId(1)), v).unwrap(), 1.0);
        assert_eq!(aggregate_actors(&ids[..1], ActorAggregate::ImpartialMean, v), Err(Error::TooFewActors));
    }
}
