//! Run configuration: prediction model, metrics with their parameters,
//! conflict areas and filter settings, read from TOML.

use std::path::Path;

use criticality::models::potential::{Gaussian, LinearRamp, PotentialField, QuadraticBowl};
use criticality::models::{ManeuverModel, TraceSetModel};
use criticality::probabilistic::{PathChain, TreeNode, UniformControls};
use criticality::scenario::{Aggregate, InflatedFootprint, ThresholdDetector};
use criticality::scene::misc::{LogisticGap, NormOrder, RssSafeDistance, ThresholdGap};
use criticality::scene::{GapAcceptance, TciParams};
use criticality::stats::Distribution;
use criticality::{CapabilityEnvelope, ConflictArea, ContactConfig, DistanceMode, MetricContext, MetricId, MotionModel, Predictor, Vec2};
use serde::Deserialize;

use crate::error::{CliError, Result};

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "footprint")]
    pub distance_mode: DistanceMode,
    #[serde(default)]
    pub prediction: PredictionConfig,
    /// Envelope given to every actor; the core default when absent.
    #[serde(default)]
    pub capabilities: Option<CapabilityEnvelope>,
    /// Reaction time of actors, seconds.
    #[serde(default = "one")]
    pub reaction_time: f64,
    /// Samples on each side for jerk derived from accelerations.
    #[serde(default = "one_sample")]
    pub jerk_window: usize,
    #[serde(default)]
    pub conflict_areas: Vec<ConflictAreaSpec>,
    #[serde(default)]
    pub metrics: Vec<MetricSpec>,
    #[serde(default)]
    pub filter: FilterConfig,
}

fn footprint() -> DistanceMode {
    DistanceMode::Footprint
}

fn one() -> f64 {
    1.0
}

fn one_sample() -> usize {
    1
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PredictionConfig {
    #[serde(default)]
    pub model: MotionModel,
    #[serde(default = "default_horizon")]
    pub horizon: f64,
    #[serde(default = "default_step")]
    pub step: f64,
}

fn default_horizon() -> f64 {
    Predictor::default().horizon
}

fn default_step() -> f64 {
    Predictor::default().step
}

impl Default for PredictionConfig {
    fn default() -> Self {
        PredictionConfig { model: MotionModel::default(), horizon: default_horizon(), step: default_step() }
    }
}

impl PredictionConfig {
    pub fn predictor(&self) -> Result<Predictor> {
        Ok(Predictor::new(self.model.clone(), self.horizon, self.step)?)
    }
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConflictAreaSpec {
    pub id: u32,
    pub polygon: Vec<[f64; 2]>,
}

impl ConflictAreaSpec {
    pub fn area(&self) -> Result<ConflictArea> {
        Ok(ConflictArea::new(self.id, self.polygon.iter().map(|p| Vec2::new(p[0], p[1])).collect())?)
    }
}

#[derive(Clone, Copy, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FilterConfig {
    #[serde(default)]
    pub margin_pre: f64,
    #[serde(default)]
    pub margin_post: f64,
}

/// Side of the target value on which a metric value counts as critical.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Direction {
    Below,
    Above,
}

impl Direction {
    pub fn critical(self, value: f64, target: f64) -> bool {
        match self {
            Direction::Below => value <= target,
            Direction::Above => value >= target,
        }
    }
}

#[derive(Clone, Copy, Debug, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum ManeuverSpec {
    Brake {
        #[serde(default)]
        deceleration: Option<f64>,
    },
    SteerLeft {
        #[serde(default)]
        lateral_acceleration: Option<f64>,
    },
    SteerRight {
        #[serde(default)]
        lateral_acceleration: Option<f64>,
    },
    Kickdown {
        #[serde(default)]
        acceleration: Option<f64>,
    },
}

impl ManeuverSpec {
    pub fn model(self) -> ManeuverModel {
        match self {
            ManeuverSpec::Brake { deceleration } => ManeuverModel::Brake { deceleration },
            ManeuverSpec::SteerLeft { lateral_acceleration } => ManeuverModel::SteerLeft { lateral_acceleration },
            ManeuverSpec::SteerRight { lateral_acceleration } => ManeuverModel::SteerRight { lateral_acceleration },
            ManeuverSpec::Kickdown { acceleration } => ManeuverModel::Kickdown { acceleration },
        }
    }
}

#[derive(Clone, Copy, Debug, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum GapSpec {
    Threshold { min_gap: f64 },
    Logistic { midpoint: f64, scale: f64, threshold: f64 },
}

impl GapSpec {
    pub fn model(self) -> Box<dyn GapAcceptance + Send + Sync> {
        match self {
            GapSpec::Threshold { min_gap } => Box::new(ThresholdGap { min_gap }),
            GapSpec::Logistic { midpoint, scale, threshold } => Box::new(LogisticGap { midpoint, scale, threshold }),
        }
    }
}

#[derive(Clone, Copy, Debug, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum PotentialSpec {
    Gaussian { center: [f64; 2], amplitude: f64, sigma: f64 },
    Quadratic { center: [f64; 2], scale: f64 },
    Ramp { gradient: [f64; 2], offset: f64 },
}

impl PotentialSpec {
    pub fn field(self) -> Box<dyn PotentialField> {
        let v = |p: [f64; 2]| Vec2::new(p[0], p[1]);
        match self {
            PotentialSpec::Gaussian { center, amplitude, sigma } => Box::new(Gaussian { center: v(center), amplitude, sigma }),
            PotentialSpec::Quadratic { center, scale } => Box::new(QuadraticBowl { center: v(center), scale }),
            PotentialSpec::Ramp { gradient, offset } => Box::new(LinearRamp { gradient: v(gradient), offset }),
        }
    }
}

/// Gaussian bump centered on every other actor.
#[derive(Clone, Copy, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ActorPotential {
    pub amplitude: f64,
    pub sigma: f64,
}

impl Default for ActorPotential {
    fn default() -> Self {
        ActorPotential { amplitude: 1.0, sigma: 2.0 }
    }
}

#[derive(Clone, Copy, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TraceSetSpec {
    pub long_levels: usize,
    pub lat_levels: usize,
}

impl Default for TraceSetSpec {
    fn default() -> Self {
        let d = TraceSetModel::default();
        TraceSetSpec { long_levels: d.long_levels, lat_levels: d.lat_levels }
    }
}

impl TraceSetSpec {
    pub fn model(self) -> TraceSetModel {
        TraceSetModel { long_levels: self.long_levels, lat_levels: self.lat_levels }
    }
}

/// Norm order of the safety potential: a positive integer or `"max"`.
#[derive(Clone, Debug, Deserialize)]
#[serde(untagged)]
pub enum NormSpec {
    Order(u32),
    Name(String),
}

impl NormSpec {
    pub fn order(&self) -> Result<NormOrder> {
        match self {
            NormSpec::Order(0) => Err(CliError::data("norm order must be positive")),
            NormSpec::Order(k) => Ok(NormOrder::Finite(*k)),
            NormSpec::Name(s) if s == "max" => Ok(NormOrder::Max),
            NormSpec::Name(s) => Err(CliError::data(format!("unknown norm `{s}`"))),
        }
    }
}

/// How a metric is evaluated.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Level {
    /// Per scene and ordered actor pair.
    ScenePair,
    /// Per scene and actor.
    SceneActor,
    /// Per scenario and ordered actor pair.
    ScenarioPair,
    /// Per scenario and actor.
    ScenarioActor,
    /// Once per scenario.
    Scenario,
}

impl Level {
    pub fn of(id: MetricId) -> Level {
        use MetricId::*;
        match id {
            Ttc | Pttc | Thw | Hw | Dce | Ttce | Pret | Spret | Ta | Tto | ALongReq | ALatReq | AReq | AReqCond | Btn | Stn
            | Dst | Ttb | Tts | Ttk | Ttm | Ttr | Wttc | Sp | DeltaV | JokschFatality | PSmh | PSrs | Aci => Level::ScenePair,
            LatJ | LongJ | Msd | Psd | Ttz | Ags | Rss | Pf | Tci | PMc => Level::SceneActor,
            Tet | Tit | Tta | Cs | Cpi | Pet | Ci | Pri => Level::ScenarioPair,
            Et | Soi => Level::ScenarioActor,
            Am => Level::Scenario,
        }
    }

    pub fn per_scene(self) -> bool {
        matches!(self, Level::ScenePair | Level::SceneActor)
    }
}

/// One requested metric. Parameters not used by the metric are ignored.
#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MetricSpec {
    pub id: MetricId,
    /// Restrict the subject (A1) to this actor.
    #[serde(default)]
    pub ego: Option<u64>,
    /// Target TTC of TET and TIT.
    #[serde(default)]
    pub tau: Option<f64>,
    /// Safety time of DST.
    #[serde(default)]
    pub t_s: f64,
    #[serde(default)]
    pub alpha: Option<f64>,
    #[serde(default)]
    pub beta: Option<f64>,
    #[serde(default)]
    pub norm: Option<NormSpec>,
    #[serde(default)]
    pub conflict_area: Option<u32>,
    #[serde(default)]
    pub maneuver: Option<ManeuverSpec>,
    #[serde(default)]
    pub maneuvers: Option<Vec<ManeuverSpec>>,
    /// Braking capability distribution of CPI.
    #[serde(default)]
    pub capability: Option<Distribution>,
    #[serde(default)]
    pub detector: Option<ThresholdDetector>,
    #[serde(default)]
    pub personal_space: Option<InflatedFootprint>,
    #[serde(default)]
    pub gap: Option<GapSpec>,
    #[serde(default)]
    pub safe_distance: Option<RssSafeDistance>,
    #[serde(default)]
    pub potentials: Vec<PotentialSpec>,
    #[serde(default)]
    pub actor_potential: Option<ActorPotential>,
    #[serde(default)]
    pub tci: Option<TciParams>,
    #[serde(default)]
    pub trace_set: Option<TraceSetSpec>,
    #[serde(default)]
    pub samples: Option<usize>,
    #[serde(default)]
    pub sampler: Option<UniformControls>,
    #[serde(default)]
    pub path_chain: Option<PathChain>,
    #[serde(default)]
    pub tree: Option<TreeNode>,
    /// Aggregations over time, emitted once per scenario and subject.
    #[serde(default)]
    pub aggregate: Vec<Aggregate>,
    /// Target value for filtering.
    #[serde(default)]
    pub target: Option<f64>,
    #[serde(default)]
    pub direction: Option<Direction>,
}

impl MetricSpec {
    /// A spec with every parameter at its default.
    pub fn bare(id: MetricId) -> Self {
        MetricSpec {
            id,
            ego: None,
            tau: None,
            t_s: 0.0,
            alpha: None,
            beta: None,
            norm: None,
            conflict_area: None,
            maneuver: None,
            maneuvers: None,
            capability: None,
            detector: None,
            personal_space: None,
            gap: None,
            safe_distance: None,
            potentials: Vec::new(),
            actor_potential: None,
            tci: None,
            trace_set: None,
            samples: None,
            sampler: None,
            path_chain: None,
            tree: None,
            aggregate: Vec::new(),
            target: None,
            direction: None,
        }
    }

    pub fn level(&self) -> Level {
        Level::of(self.id)
    }

    fn validate(&self, areas: &[ConflictAreaSpec]) -> Result<()> {
        use MetricId::*;
        let id = self.id;
        let fail = |msg: &str| Err(CliError::data(format!("metric {id}: {msg}")));
        match id {
            Tet | Tit if !self.tau.is_some_and(|t| t > 0.0 && t.is_finite()) => return fail("needs a positive `tau`"),
            Pet | Et | Ci | Pri | Psd | Ttz => match self.conflict_area {
                None => return fail("needs `conflict_area`"),
                Some(ca) if !areas.iter().any(|a| a.id == ca) => return fail(&format!("unknown conflict area {ca}")),
                _ => {}
            },
            Cpi => match self.capability {
                None => return fail("needs a `capability` distribution"),
                Some(d) => d.validate()?,
            },
            Ags if self.gap.is_none() => return fail("needs a `gap` acceptance model"),
            Ttm if self.maneuver.is_none() => return fail("needs a `maneuver`"),
            Aci if self.tree.is_none() => return fail("needs a collision `tree`"),
            Dst if !(self.t_s >= 0.0 && self.t_s.is_finite()) => return fail("`t_s` must be non-negative"),
            PMc if self.samples == Some(0) => return fail("`samples` must be positive"),
            _ => {}
        }
        if let Some(a) = self.alpha {
            if !(0.0..=1.0).contains(&a) {
                return fail("`alpha` must lie in [0, 1]");
            }
        }
        if self.beta.is_some_and(|b| !(b > 0.0)) {
            return fail("`beta` must be positive");
        }
        if let Some(n) = &self.norm {
            n.order()?;
        }
        if !self.aggregate.is_empty() && !self.level().per_scene() {
            return fail("aggregation over time applies to scene metrics only");
        }
        for a in &self.aggregate {
            if let Aggregate::Quantile { p } = a {
                if !(0.0..=1.0).contains(p) {
                    return fail("quantile outside [0, 1]");
                }
            }
        }
        match (self.target, self.direction) {
            (Some(t), Some(_)) if t.is_nan() => fail("target is not a number"),
            (Some(_), Some(_)) if !self.level().per_scene() => fail("filter targets apply to scene metrics only"),
            (Some(_), None) => fail("a target needs a `direction` (below or above)"),
            (None, Some(_)) => fail("a direction needs a `target`"),
            _ => Ok(()),
        }
    }
}

impl RunConfig {
    pub fn parse(text: &str) -> Result<Self> {
        let config: RunConfig = toml::from_str(text).map_err(|e| CliError::data(format!("config: {e}")))?;
        config.validate()?;
        Ok(config)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        RunConfig::parse(&text).map_err(|e| CliError::data(format!("{}: {e}", path.display())))
    }

    pub fn validate(&self) -> Result<()> {
        self.prediction.predictor()?;
        if let Some(c) = &self.capabilities {
            c.validate()?;
        }
        if !(self.reaction_time >= 0.0 && self.reaction_time.is_finite()) {
            return Err(CliError::data("reaction_time must be non-negative"));
        }
        if !(self.filter.margin_pre >= 0.0 && self.filter.margin_post >= 0.0) {
            return Err(CliError::data("filter margins must be non-negative"));
        }
        for (i, a) in self.conflict_areas.iter().enumerate() {
            a.area()?;
            if self.conflict_areas[..i].iter().any(|b| b.id == a.id) {
                return Err(CliError::data(format!("duplicate conflict area {}", a.id)));
            }
        }
        for m in &self.metrics {
            m.validate(&self.conflict_areas)?;
        }
        Ok(())
    }

    pub fn context(&self) -> Result<MetricContext> {
        let contact = match self.distance_mode {
            DistanceMode::Center => ContactConfig::center(),
            DistanceMode::Footprint => ContactConfig::footprint(),
        };
        Ok(MetricContext::new(self.prediction.predictor()?, contact))
    }

    /// Metrics with a filter target.
    pub fn targets(&self) -> impl Iterator<Item = (usize, &MetricSpec)> {
        self.metrics.iter().enumerate().filter(|(_, m)| m.target.is_some())
    }
}
