//! Batch metric computation into a long-format result table.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::io::Write;

use criticality::scenario::{aggregate_time, Aggregate, TimeSeries};
use criticality::{ActorId, Flag, MetricId};
use rayon::prelude::*;

use crate::config::{Level, RunConfig};
use crate::error::{CliError, Result};
use crate::evaluate::Evaluator;
use crate::trajectories::Recording;

/// One value (or error) of the result table.
#[derive(Clone, Debug, PartialEq)]
pub struct ResultRow {
    pub recording: String,
    /// Scene time; `None` for scenario-level rows.
    pub t: Option<f64>,
    pub metric: MetricId,
    /// Position of the metric in the config, to keep repeated ids apart.
    pub spec: usize,
    pub aggregate: Option<String>,
    pub subjects: Vec<u64>,
    pub value: Option<f64>,
    pub flag: Option<Flag>,
    pub error: Option<String>,
}

impl ResultRow {
    fn new(recording: &str, t: Option<f64>, metric: MetricId, spec: usize, subjects: Vec<u64>, v: criticality::Result<criticality::Flagged<f64>>) -> Self {
        let (value, flag, error) = match v {
            Ok(f) => (Some(f.value), f.flag, None),
            Err(e) => (None, None, Some(e.to_string())),
        };
        ResultRow { recording: recording.to_string(), t, metric, spec, aggregate: None, subjects, value, flag, error }
    }

    /// Table order: recording, time (scenario rows last), metric, config
    /// position, aggregation, subjects.
    pub fn sort_key_cmp(&self, other: &Self) -> Ordering {
        let time = match (self.t, other.t) {
            (Some(a), Some(b)) => a.total_cmp(&b),
            (Some(_), None) => Ordering::Less,
            (None, Some(_)) => Ordering::Greater,
            (None, None) => Ordering::Equal,
        };
        self.recording
            .cmp(&other.recording)
            .then(time)
            .then(self.metric.as_str().cmp(other.metric.as_str()))
            .then(self.spec.cmp(&other.spec))
            .then(self.aggregate.cmp(&other.aggregate))
            .then(self.subjects.cmp(&other.subjects))
    }
}

fn subject_ids(a1: Option<ActorId>, a2: Option<ActorId>) -> Vec<u64> {
    a1.into_iter().chain(a2).map(|a| a.0).collect()
}

pub fn aggregate_name(a: Aggregate) -> String {
    match a {
        Aggregate::Min => "min".into(),
        Aggregate::Max => "max".into(),
        Aggregate::Mean => "mean".into(),
        Aggregate::Median => "median".into(),
        Aggregate::Quantile { p } => format!("quantile_{p}"),
        Aggregate::Sum => "sum".into(),
        Aggregate::Integral => "integral".into(),
    }
}

/// All rows of one recording, in table order.
pub fn compute_recording(eval: &Evaluator, recording: &Recording) -> Vec<ResultRow> {
    let metrics = &eval.config.metrics;
    let scenario = match eval.prepare(recording) {
        Ok(s) => s,
        Err(e) => {
            return metrics
                .iter()
                .enumerate()
                .map(|(i, m)| ResultRow::new(&recording.id, None, m.id, i, Vec::new(), Err(criticality::Error::InvalidParameter(e.to_string()))))
                .collect();
        }
    };
    let scene_rows: Vec<Vec<ResultRow>> = scenario
        .scenes
        .par_iter()
        .map(|scene| {
            let mut rows = Vec::new();
            for (i, spec) in metrics.iter().enumerate() {
                match spec.level() {
                    Level::ScenePair => {
                        for (a1, a2) in eval.scene_pairs(spec, scene) {
                            let v = eval.scene_value(i, scene, &recording.id, a1, Some(a2));
                            rows.push(ResultRow::new(&recording.id, Some(scene.t), spec.id, i, subject_ids(Some(a1), Some(a2)), v));
                        }
                    }
                    Level::SceneActor => {
                        for a1 in eval.scene_actors(spec, scene) {
                            let v = eval.scene_value(i, scene, &recording.id, a1, None);
                            rows.push(ResultRow::new(&recording.id, Some(scene.t), spec.id, i, vec![a1.0], v));
                        }
                    }
                    _ => {}
                }
            }
            rows
        })
        .collect();
    let mut rows: Vec<ResultRow> = scene_rows.into_iter().flatten().collect();

    // aggregation over time of the successful scene values
    let mut series: BTreeMap<(usize, Vec<u64>), Vec<(f64, f64)>> = BTreeMap::new();
    for r in &rows {
        if let (Some(t), Some(v)) = (r.t, r.value) {
            if !metrics[r.spec].aggregate.is_empty() {
                series.entry((r.spec, r.subjects.clone())).or_default().push((t, v));
            }
        }
    }
    for ((i, subjects), samples) in series {
        let spec = &metrics[i];
        for &agg in &spec.aggregate {
            let v = TimeSeries::new(samples.clone()).and_then(|s| aggregate_time(&s, agg)).map(criticality::Flagged::plain);
            let mut row = ResultRow::new(&recording.id, None, spec.id, i, subjects.clone(), v);
            row.aggregate = Some(aggregate_name(agg));
            rows.push(row);
        }
    }

    for (i, spec) in metrics.iter().enumerate() {
        if spec.level().per_scene() {
            continue;
        }
        for (a1, a2) in eval.scenario_subjects(spec, &scenario) {
            let v = eval.scenario_value(spec, &scenario, a1, a2);
            rows.push(ResultRow::new(&recording.id, None, spec.id, i, subject_ids(a1, a2), v));
        }
    }
    rows.sort_by(ResultRow::sort_key_cmp);
    rows
}

/// Rows of all recordings, in table order. Runs on the current rayon pool.
pub fn compute(config: &RunConfig, recordings: &[Recording]) -> Result<Vec<ResultRow>> {
    let eval = Evaluator::new(config)?;
    let per_recording: Vec<Vec<ResultRow>> = recordings.par_iter().map(|r| compute_recording(&eval, r)).collect();
    let mut rows: Vec<ResultRow> = per_recording.into_iter().flatten().collect();
    rows.sort_by(ResultRow::sort_key_cmp);
    Ok(rows)
}

pub fn format_value(v: f64) -> String {
    // Display prints infinities as `inf` and `-inf`
    v.to_string()
}

pub const RESULT_COLUMNS: [&str; 8] = ["recording", "t", "metric", "aggregate", "subjects", "value", "flag", "error"];

pub fn write_results(out: impl Write, rows: &[ResultRow]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let fail = |e: csv::Error| CliError::data(format!("writing results: {e}"));
    w.write_record(RESULT_COLUMNS).map_err(fail)?;
    for r in rows {
        let subjects: Vec<String> = r.subjects.iter().map(u64::to_string).collect();
        w.write_record([
            r.recording.as_str(),
            &r.t.map(format_value).unwrap_or_default(),
            r.metric.as_str(),
            r.aggregate.as_deref().unwrap_or(""),
            &subjects.join("-"),
            &r.value.map(format_value).unwrap_or_default(),
            r.flag.map(Flag::as_str).unwrap_or(""),
            r.error.as_deref().unwrap_or(""),
        ])
        .map_err(fail)?;
    }
    w.flush().map_err(|e| CliError::data(format!("writing results: {e}")))
}
