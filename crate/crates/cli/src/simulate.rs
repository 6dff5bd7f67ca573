//! Trajectories of actors continued by a prediction model.

use std::path::Path;

use criticality::models::sample_times;
use criticality::{ActorState, Scenario, Scene, Vec2};
use serde::Deserialize;

use crate::config::PredictionConfig;
use crate::error::{CliError, Result};
use crate::trajectories::{parse_class, Recording};

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SimConfig {
    #[serde(default = "default_recording")]
    pub recording_id: String,
    #[serde(default)]
    pub prediction: PredictionConfig,
    pub actors: Vec<SimActor>,
}

fn default_recording() -> String {
    "sim".into()
}

/// Initial state of one simulated actor.
#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SimActor {
    pub id: u64,
    pub x: f64,
    pub y: f64,
    #[serde(default)]
    pub vx: f64,
    #[serde(default)]
    pub vy: f64,
    #[serde(default)]
    pub ax: f64,
    #[serde(default)]
    pub ay: f64,
    /// Defaults to the direction of travel.
    #[serde(default)]
    pub heading: Option<f64>,
    #[serde(default)]
    pub yaw_rate: f64,
    #[serde(default)]
    pub steering_angle: Option<f64>,
    #[serde(default = "default_width")]
    pub width: f64,
    #[serde(default = "default_length")]
    pub length: f64,
    #[serde(default = "default_class")]
    pub class: String,
    #[serde(default)]
    pub mass: Option<f64>,
}

fn default_width() -> f64 {
    2.0
}

fn default_length() -> f64 {
    4.0
}

fn default_class() -> String {
    "human_vehicle".into()
}

impl SimActor {
    fn state(&self) -> Result<ActorState> {
        let class = parse_class(&self.class).ok_or_else(|| CliError::data(format!("actor {}: unknown class `{}`", self.id, self.class)))?;
        let mut s = ActorState::new(self.id, 0.0, Vec2::new(self.x, self.y), Vec2::new(self.vx, self.vy))
            .with_acceleration(Vec2::new(self.ax, self.ay))
            .with_yaw_rate(self.yaw_rate)
            .with_size(self.length, self.width)
            .with_class(class);
        if let Some(h) = self.heading {
            s = s.with_yaw(h);
        }
        if let Some(phi) = self.steering_angle {
            s = s.with_steering_angle(phi);
        }
        if let Some(m) = self.mass {
            s = s.with_mass(m);
        }
        s.validate()?;
        Ok(s)
    }
}

impl SimConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        toml::from_str(&text).map_err(|e| CliError::data(format!("{}: {e}", path.display())))
    }
}

/// Predicts every actor over the horizon and samples all of them at the
/// prediction step. Accelerations are differences of the sampled velocities.
pub fn simulate(config: &SimConfig) -> Result<Recording> {
    let predictor = config.prediction.predictor()?;
    let times = sample_times(predictor.horizon, predictor.step);
    let mut tracks = Vec::with_capacity(config.actors.len());
    for a in &config.actors {
        let state = a.state()?;
        let trajectory = predictor.predict(&state)?;
        tracks.push((state, trajectory));
    }
    let mut scenes = Vec::with_capacity(times.len());
    for (k, &t) in times.iter().enumerate() {
        let (lo, hi) = (times[k.saturating_sub(1)], times[(k + 1).min(times.len() - 1)]);
        let actors = tracks
            .iter()
            .map(|(s, tr)| {
                let p = tr.at(t);
                let accel = if hi > lo { (tr.at(hi).velocity - tr.at(lo).velocity) / (hi - lo) } else { s.acceleration };
                let mut a = s.clone();
                a.t = t;
                a.position = p.position;
                a.velocity = p.velocity;
                a.acceleration = accel;
                a.yaw = p.heading;
                a
            })
            .collect();
        scenes.push(Scene::new(t, actors)?);
    }
    Ok(Recording { id: config.recording_id.clone(), scenario: Scenario::new(scenes)? })
}
