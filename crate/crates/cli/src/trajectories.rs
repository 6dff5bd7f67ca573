//! Trajectory tables: one row per actor and time stamp, grouped into
//! recordings by `recording_id`.

use std::collections::BTreeMap;
use std::fs::File;
use std::io::{Read, Write};
use std::path::Path;

use criticality::{ActorClass, ActorState, Scenario, Scene, Vec2};
use serde::Deserialize;

use crate::error::{CliError, Result};

/// Mandatory columns, in the order they are written.
pub const COLUMNS: [&str; 13] = [
    "recording_id",
    "t_s",
    "actor_id",
    "x_m",
    "y_m",
    "vx_mps",
    "vy_mps",
    "ax_mps2",
    "ay_mps2",
    "heading_rad",
    "width_m",
    "length_m",
    "class",
];

pub const MASS_COLUMN: &str = "mass_kg";

/// One recording of the dataset.
#[derive(Clone, Debug, PartialEq)]
pub struct Recording {
    pub id: String,
    pub scenario: Scenario,
}

#[derive(Debug, Deserialize)]
struct Row {
    recording_id: String,
    t_s: f64,
    actor_id: u64,
    x_m: f64,
    y_m: f64,
    vx_mps: f64,
    vy_mps: f64,
    ax_mps2: f64,
    ay_mps2: f64,
    heading_rad: f64,
    width_m: f64,
    length_m: f64,
    class: String,
    #[serde(default)]
    mass_kg: Option<f64>,
}

impl Row {
    fn numbers(&self) -> [(&'static str, f64); 11] {
        [
            ("t_s", self.t_s),
            ("x_m", self.x_m),
            ("y_m", self.y_m),
            ("vx_mps", self.vx_mps),
            ("vy_mps", self.vy_mps),
            ("ax_mps2", self.ax_mps2),
            ("ay_mps2", self.ay_mps2),
            ("heading_rad", self.heading_rad),
            ("width_m", self.width_m),
            ("length_m", self.length_m),
            ("mass_kg", self.mass_kg.unwrap_or(0.0)),
        ]
    }
}

/// Class names of the core plus common dataset spellings.
pub fn parse_class(s: &str) -> Option<ActorClass> {
    if let Ok(c) = s.parse() {
        return Some(c);
    }
    Some(match s.to_ascii_lowercase().as_str() {
        "car" | "truck" | "bus" | "van" | "trailer" | "motorcycle" | "vehicle" => ActorClass::HumanVehicle,
        "av" | "automated" | "ego" => ActorClass::AutomatedVehicle,
        "cyclist" | "bike" => ActorClass::Bicycle,
        "person" | "walker" => ActorClass::Pedestrian,
        _ => return None,
    })
}

/// Parses a trajectory table. Rows may come in any order; a repeated
/// `(recording, actor, time)` is an error naming the later line.
pub fn parse_trajectories(input: impl Read) -> Result<Vec<Recording>> {
    let mut reader = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(input);
    let headers = reader.headers().map_err(|e| CliError::data(format!("header: {e}")))?.clone();
    for c in COLUMNS {
        if !headers.iter().any(|h| h == c) {
            return Err(CliError::data(format!("missing column `{c}`")));
        }
    }
    // (line, row)
    let mut rows: Vec<(u64, Row)> = Vec::new();
    for record in reader.records() {
        let record = record.map_err(|e| {
            let line = e.position().map_or(0, |p| p.line());
            CliError::data(format!("line {line}: {e}"))
        })?;
        let line = record.position().map_or(0, |p| p.line());
        let row: Row = record
            .deserialize(Some(&headers))
            .map_err(|e| CliError::data(format!("line {line}: {}", deserialize_message(&e))))?;
        if let Some((name, _)) = row.numbers().iter().find(|(_, v)| !v.is_finite()) {
            return Err(CliError::data(format!("line {line}: non-finite value in `{name}`")));
        }
        rows.push((line, row));
    }
    rows.sort_by(|(la, a), (lb, b)| {
        a.recording_id
            .cmp(&b.recording_id)
            .then(a.t_s.total_cmp(&b.t_s))
            .then(a.actor_id.cmp(&b.actor_id))
            .then(la.cmp(lb))
    });
    for w in rows.windows(2) {
        let ((_, a), (line, b)) = (&w[0], &w[1]);
        if a.recording_id == b.recording_id && a.t_s == b.t_s && a.actor_id == b.actor_id {
            return Err(CliError::data(format!(
                "line {line}: actor {} appears twice at t = {} in recording `{}`",
                b.actor_id, b.t_s, b.recording_id
            )));
        }
    }

    let mut grouped: BTreeMap<String, Vec<Scene>> = BTreeMap::new();
    for (line, row) in rows {
        let class = parse_class(&row.class)
            .ok_or_else(|| CliError::data(format!("line {line}: unknown actor class `{}`", row.class)))?;
        let mut actor = ActorState::new(row.actor_id, row.t_s, Vec2::new(row.x_m, row.y_m), Vec2::new(row.vx_mps, row.vy_mps))
            .with_acceleration(Vec2::new(row.ax_mps2, row.ay_mps2))
            .with_yaw(row.heading_rad)
            .with_size(row.length_m, row.width_m)
            .with_class(class);
        if let Some(m) = row.mass_kg {
            actor = actor.with_mass(m);
        }
        actor.validate().map_err(|e| CliError::data(format!("line {line}: {e}")))?;
        let scenes = grouped.entry(row.recording_id).or_default();
        match scenes.last_mut() {
            Some(s) if s.t == row.t_s => s.actors.push(actor),
            _ => scenes.push(Scene::new(row.t_s, vec![actor])?),
        }
    }
    grouped
        .into_iter()
        .map(|(id, scenes)| {
            let scenario = Scenario::new(scenes).map_err(|e| CliError::data(format!("recording `{id}`: {e}")))?;
            Ok(Recording { id, scenario })
        })
        .collect()
}

fn deserialize_message(e: &csv::Error) -> String {
    match e.kind() {
        csv::ErrorKind::Deserialize { err, .. } => match err.field() {
            Some(i) => format!("field {}: {}", i + 1, err.kind()),
            None => err.kind().to_string(),
        },
        _ => e.to_string(),
    }
}

pub fn read_trajectories(path: &Path) -> Result<Vec<Recording>> {
    let file = File::open(path).map_err(|e| CliError::io(path, e))?;
    parse_trajectories(std::io::BufReader::new(file)).map_err(|e| match e {
        CliError::Data(msg) => CliError::Data(format!("{}: {msg}", path.display())),
        other => other,
    })
}

/// Writes recordings in the input format, with a `mass_kg` column.
/// Numbers use the shortest representation that parses back exactly.
pub fn write_trajectories(out: impl Write, recordings: &[Recording]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let mut header: Vec<&str> = COLUMNS.to_vec();
    header.push(MASS_COLUMN);
    let fail = |e: csv::Error| CliError::data(format!("writing trajectories: {e}"));
    w.write_record(&header).map_err(fail)?;
    for r in recordings {
        for s in &r.scenario.scenes {
            for a in &s.actors {
                let num = |v: f64| v.to_string();
                w.write_record([
                    r.id.clone(),
                    num(s.t),
                    a.id.0.to_string(),
                    num(a.position.x),
                    num(a.position.y),
                    num(a.velocity.x),
                    num(a.velocity.y),
                    num(a.acceleration.x),
                    num(a.acceleration.y),
                    num(a.yaw),
                    num(a.width),
                    num(a.length),
                    a.class.as_str().to_string(),
                    a.mass.map(num).unwrap_or_default(),
                ])
                .map_err(fail)?;
            }
        }
    }
    w.flush().map_err(|e| CliError::data(format!("writing trajectories: {e}")))
}
