//! Critical intervals of recordings: where any target metric crosses its
//! target value in the critical direction.

use std::collections::BTreeMap;
use std::io::Write;

use rayon::prelude::*;

use crate::compute::format_value;
use crate::config::{Direction, Level, RunConfig};
use crate::error::{CliError, Result};
use crate::evaluate::Evaluator;
use crate::trajectories::Recording;

#[derive(Clone, Debug, PartialEq)]
pub struct CriticalInterval {
    pub recording: String,
    pub start: f64,
    pub end: f64,
}

/// Time at which the segment from `(t0, v0)` to `(t1, v1)` reaches `target`.
/// A segment with an infinite end switches at its midpoint.
fn crossing(t0: f64, v0: f64, t1: f64, v1: f64, target: f64) -> f64 {
    if v0.is_finite() && v1.is_finite() && v0 != v1 {
        (t0 + (t1 - t0) * (target - v0) / (v1 - v0)).clamp(t0, t1)
    } else {
        0.5 * (t0 + t1)
    }
}

/// Threshold state of one metric series, fed one sample at a time.
#[derive(Clone, Debug)]
pub struct SeriesDetector {
    target: f64,
    direction: Direction,
    last: Option<(f64, f64)>,
    open: Option<f64>,
}

impl SeriesDetector {
    pub fn new(target: f64, direction: Direction) -> Self {
        SeriesDetector { target, direction, last: None, open: None }
    }

    /// Adds a sample; returns an interval if one closed.
    pub fn push(&mut self, t: f64, v: f64) -> Option<(f64, f64)> {
        let now = self.direction.critical(v, self.target);
        let mut closed = None;
        match self.last {
            Some((t0, v0)) => {
                let before = self.direction.critical(v0, self.target);
                if !before && now {
                    self.open = Some(crossing(t0, v0, t, v, self.target));
                } else if before && !now {
                    let end = crossing(t0, v0, t, v, self.target);
                    closed = self.open.take().map(|s| (s, end));
                }
            }
            None if now => self.open = Some(t),
            None => {}
        }
        self.last = Some((t, v));
        closed
    }

    /// Ends the series at its last sample.
    pub fn finish(&mut self) -> Option<(f64, f64)> {
        let end = self.last.take().map(|l| l.0);
        self.open.take().zip(end)
    }
}

/// Sorts and merges overlapping or touching intervals.
pub fn merge(mut intervals: Vec<(f64, f64)>) -> Vec<(f64, f64)> {
    intervals.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.total_cmp(&b.1)));
    let mut out: Vec<(f64, f64)> = Vec::with_capacity(intervals.len());
    for (s, e) in intervals {
        match out.last_mut() {
            Some(last) if s <= last.1 => last.1 = last.1.max(e),
            _ => out.push((s, e)),
        }
    }
    out
}

/// Widens by the margins, clamps to `[t_0, t_e]` and merges again.
pub fn with_margins(intervals: &[(f64, f64)], pre: f64, post: f64, t_0: f64, t_e: f64) -> Vec<(f64, f64)> {
    merge(intervals.iter().map(|(s, e)| ((s - pre).max(t_0), (e + post).min(t_e))).collect())
}

/// Critical intervals of one recording and the number of failed metric
/// evaluations, which are treated as gaps in their series.
pub fn filter_recording(eval: &Evaluator, recording: &Recording) -> Result<(Vec<(f64, f64)>, usize)> {
    let scenario = eval.prepare(recording)?;
    let targets: Vec<(usize, f64, Direction)> = eval
        .config
        .targets()
        .filter_map(|(i, m)| Some((i, m.target?, m.direction?)))
        .collect();
    let mut detectors: BTreeMap<(usize, u64, Option<u64>), SeriesDetector> = BTreeMap::new();
    let mut found = Vec::new();
    let mut failed = 0;
    for scene in &scenario.scenes {
        let mut seen = Vec::new();
        for &(i, target, direction) in &targets {
            let spec = &eval.config.metrics[i];
            let subjects: Vec<(_, Option<_>)> = match spec.level() {
                Level::ScenePair => eval.scene_pairs(spec, scene).into_iter().map(|(a, b)| (a, Some(b))).collect(),
                _ => eval.scene_actors(spec, scene).into_iter().map(|a| (a, None)).collect(),
            };
            for (a1, a2) in subjects {
                match eval.scene_value(i, scene, &recording.id, a1, a2) {
                    Ok(v) => {
                        let key = (i, a1.0, a2.map(|a| a.0));
                        let d = detectors.entry(key).or_insert_with(|| SeriesDetector::new(target, direction));
                        found.extend(d.push(scene.t, v.value));
                        seen.push(key);
                    }
                    Err(_) => failed += 1,
                }
            }
        }
        // a series without a value in this scene is interrupted
        for (key, d) in detectors.iter_mut() {
            if !seen.contains(key) {
                found.extend(d.finish());
            }
        }
    }
    for d in detectors.values_mut() {
        found.extend(d.finish());
    }
    let f = eval.config.filter;
    Ok((with_margins(&merge(found), f.margin_pre, f.margin_post, scenario.t_0(), scenario.t_e()), failed))
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct FilterReport {
    pub intervals: Vec<CriticalInterval>,
    pub failed_evaluations: usize,
}

/// Critical intervals of all recordings, sorted by recording and start.
pub fn filter(config: &RunConfig, recordings: &[Recording]) -> Result<FilterReport> {
    if config.targets().next().is_none() {
        return Err(CliError::data("no metric has a filter target"));
    }
    let eval = Evaluator::new(config)?;
    let per: Vec<(String, Vec<(f64, f64)>, usize)> = recordings
        .par_iter()
        .map(|r| filter_recording(&eval, r).map(|(iv, n)| (r.id.clone(), iv, n)))
        .collect::<Result<_>>()?;
    let mut report = FilterReport::default();
    for (id, intervals, failed) in per {
        report.failed_evaluations += failed;
        report
            .intervals
            .extend(intervals.into_iter().map(|(start, end)| CriticalInterval { recording: id.clone(), start, end }));
    }
    report.intervals.sort_by(|a, b| a.recording.cmp(&b.recording).then(a.start.total_cmp(&b.start)));
    Ok(report)
}

pub fn write_intervals(out: impl Write, intervals: &[CriticalInterval]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let fail = |e: csv::Error| CliError::data(format!("writing intervals: {e}"));
    w.write_record(["recording", "start", "end"]).map_err(fail)?;
    for iv in intervals {
        w.write_record([iv.recording.as_str(), &format_value(iv.start), &format_value(iv.end)]).map_err(fail)?;
    }
    w.flush().map_err(|e| CliError::data(format!("writing intervals: {e}")))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run(samples: &[(f64, f64)], target: f64, direction: Direction) -> Vec<(f64, f64)> {
        let mut d = SeriesDetector::new(target, direction);
        let mut out: Vec<(f64, f64)> = samples.iter().filter_map(|(t, v)| d.push(*t, *v)).collect();
        out.extend(d.finish());
        out
    }

    #[test]
    fn linear_decrease_crosses_at_target() {
        let s: Vec<(f64, f64)> = (0..=10).map(|k| (k as f64, 10.0 - k as f64)).collect();
        assert_eq!(run(&s, 3.0, Direction::Below), vec![(7.0, 10.0)]);
        assert_eq!(run(&s, 20.0, Direction::Above), vec![]);
    }

    #[test]
    fn interval_closes_on_recovery() {
        let s = [(0.0, 5.0), (1.0, 1.0), (2.0, 5.0)];
        assert_eq!(run(&s, 3.0, Direction::Below), vec![(0.5, 1.5)]);
        let inf = [(0.0, f64::INFINITY), (1.0, 1.0), (2.0, 1.0)];
        assert_eq!(run(&inf, 3.0, Direction::Below), vec![(0.5, 2.0)]);
    }

    #[test]
    fn merging_and_margins() {
        assert_eq!(merge(vec![(3.0, 6.0), (2.0, 4.0)]), vec![(2.0, 6.0)]);
        assert_eq!(merge(vec![(0.0, 1.0), (2.0, 3.0)]), vec![(0.0, 1.0), (2.0, 3.0)]);
        assert_eq!(with_margins(&[(0.0, 1.0), (2.0, 3.0)], 0.6, 0.6, 0.0, 3.2), vec![(0.0, 3.2)]);
    }
}
