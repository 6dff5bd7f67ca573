//! Domain types: actors, scenes, scenarios and metric results.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result};
use crate::geometry::{longitudinal_lateral_decompose, polygon_signed_area, OrientedRect, Vec2};
use crate::metric_id::MetricId;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(transparent))]
pub struct ActorId(pub u64);

impl fmt::Display for ActorId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum ActorClass {
    #[default]
    HumanVehicle,
    AutomatedVehicle,
    Pedestrian,
    Bicycle,
    Other,
}

impl ActorClass {
    pub fn as_str(self) -> &'static str {
        match self {
            ActorClass::HumanVehicle => "human_vehicle",
            ActorClass::AutomatedVehicle => "automated_vehicle",
            ActorClass::Pedestrian => "pedestrian",
            ActorClass::Bicycle => "bicycle",
            ActorClass::Other => "other",
        }
    }
}

impl core::str::FromStr for ActorClass {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "human_vehicle" => ActorClass::HumanVehicle,
            "automated_vehicle" => ActorClass::AutomatedVehicle,
            "pedestrian" => ActorClass::Pedestrian,
            "bicycle" => ActorClass::Bicycle,
            "other" => ActorClass::Other,
            _ => return Err(Error::InvalidParameter(format!("unknown actor class `{s}`"))),
        })
    }
}

/// Acceleration, speed and friction limits of an actor.
#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(default))]
pub struct CapabilityEnvelope {
    /// Maximal braking, negative.
    pub a_long_min: f64,
    pub a_long_max: f64,
    pub a_lat_max: f64,
    pub v_max: f64,
    pub mu_max: f64,
}

impl Default for CapabilityEnvelope {
    fn default() -> Self {
        CapabilityEnvelope {
            a_long_min: -8.0,
            a_long_max: 3.0,
            a_lat_max: 5.0,
            v_max: 60.0,
            mu_max: 0.9,
        }
    }
}

impl CapabilityEnvelope {
    pub fn validate(&self) -> Result<()> {
        let ok = self.a_long_min < 0.0
            && self.a_long_max >= 0.0
            && self.a_lat_max > 0.0
            && self.v_max > 0.0
            && self.mu_max > 0.0
            && self.a_long_max.is_finite()
            && self.a_long_min.is_finite()
            && self.a_lat_max.is_finite();
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidCapability)
        }
    }
}

/// Kinematic and capability snapshot of one traffic participant.
#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ActorState {
    pub id: ActorId,
    pub t: f64,
    pub position: Vec2,
    pub velocity: Vec2,
    pub acceleration: Vec2,
    pub jerk: Option<Vec2>,
    pub yaw: f64,
    pub yaw_rate: f64,
    pub steering_angle: Option<f64>,
    pub sideslip: Option<f64>,
    pub width: f64,
    pub length: f64,
    pub mass: Option<f64>,
    pub capabilities: CapabilityEnvelope,
    pub reaction_time: Option<f64>,
    pub class: ActorClass,
}

impl ActorState {
    /// A 4 m × 2 m vehicle at `position` moving with `velocity`.
    ///
    /// The yaw defaults to the direction of travel (0 when stationary).
    pub fn new(id: u64, t: f64, position: Vec2, velocity: Vec2) -> Self {
        let yaw = if velocity.norm() > 0.0 { velocity.angle() } else { 0.0 };
        ActorState {
            id: ActorId(id),
            t,
            position,
            velocity,
            acceleration: Vec2::ZERO,
            jerk: None,
            yaw,
            yaw_rate: 0.0,
            steering_angle: None,
            sideslip: None,
            width: 2.0,
            length: 4.0,
            mass: None,
            capabilities: CapabilityEnvelope::default(),
            reaction_time: None,
            class: ActorClass::HumanVehicle,
        }
    }

    pub fn with_acceleration(mut self, a: Vec2) -> Self {
        self.acceleration = a;
        self
    }

    pub fn with_jerk(mut self, j: Vec2) -> Self {
        self.jerk = Some(j);
        self
    }

    pub fn with_yaw(mut self, yaw: f64) -> Self {
        self.yaw = yaw;
        self
    }

    pub fn with_yaw_rate(mut self, w: f64) -> Self {
        self.yaw_rate = w;
        self
    }

    pub fn with_steering_angle(mut self, phi: f64) -> Self {
        self.steering_angle = Some(phi);
        self
    }

    pub fn with_sideslip(mut self, beta: f64) -> Self {
        self.sideslip = Some(beta);
        self
    }

    pub fn with_size(mut self, length: f64, width: f64) -> Self {
        self.length = length;
        self.width = width;
        self
    }

    pub fn with_mass(mut self, m: f64) -> Self {
        self.mass = Some(m);
        self
    }

    pub fn with_capabilities(mut self, c: CapabilityEnvelope) -> Self {
        self.capabilities = c;
        self
    }

    pub fn with_reaction_time(mut self, t_r: f64) -> Self {
        self.reaction_time = Some(t_r);
        self
    }

    pub fn with_class(mut self, class: ActorClass) -> Self {
        self.class = class;
        self
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: &str| Err(Error::InvalidState(format!("actor {}: {msg}", self.id)));
        if !(self.width > 0.0 && self.length > 0.0) {
            return bad("width and length must be positive");
        }
        if let Some(m) = self.mass {
            if !(m > 0.0) {
                return bad("mass must be positive");
            }
        }
        if let Some(tr) = self.reaction_time {
            if !(tr >= 0.0) {
                return bad("reaction time must be non-negative");
            }
        }
        let finite = self.t.is_finite()
            && self.position.is_finite()
            && self.velocity.is_finite()
            && self.acceleration.is_finite()
            && self.jerk.is_none_or(Vec2::is_finite)
            && self.yaw.is_finite()
            && self.yaw_rate.is_finite();
        if !finite {
            return bad("non-finite kinematic field");
        }
        self.capabilities.validate()
    }

    pub fn speed(&self) -> f64 {
        self.velocity.norm()
    }

    /// Velocity component along the heading.
    pub fn v_long(&self) -> f64 {
        longitudinal_lateral_decompose(self.velocity, self.yaw).0
    }

    pub fn v_lat(&self) -> f64 {
        longitudinal_lateral_decompose(self.velocity, self.yaw).1
    }

    pub fn a_long(&self) -> f64 {
        longitudinal_lateral_decompose(self.acceleration, self.yaw).0
    }

    pub fn a_lat(&self) -> f64 {
        longitudinal_lateral_decompose(self.acceleration, self.yaw).1
    }

    pub fn heading(&self) -> Vec2 {
        Vec2::from_angle(self.yaw)
    }

    pub fn footprint(&self) -> OrientedRect {
        OrientedRect::new(self.position, self.yaw, self.length, self.width)
    }
}

/// Boolean raster of drivable cells.
#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct OccupancyGrid {
    pub origin: Vec2,
    pub cell_size: f64,
    pub cols: usize,
    pub rows: usize,
    /// Row-major, `true` for drivable.
    pub drivable: Vec<bool>,
}

impl OccupancyGrid {
    pub fn new(origin: Vec2, cell_size: f64, cols: usize, rows: usize, drivable: Vec<bool>) -> Result<Self> {
        if !(cell_size > 0.0) || drivable.len() != cols * rows {
            return Err(Error::InvalidParameter("occupancy grid dimensions".into()));
        }
        Ok(OccupancyGrid { origin, cell_size, cols, rows, drivable })
    }

    /// Grid with every cell drivable.
    pub fn all_drivable(origin: Vec2, cell_size: f64, cols: usize, rows: usize) -> Self {
        OccupancyGrid { origin, cell_size, cols, rows, drivable: alloc::vec![true; cols * rows] }
    }

    pub fn set(&mut self, col: usize, row: usize, drivable: bool) {
        if col < self.cols && row < self.rows {
            self.drivable[row * self.cols + col] = drivable;
        }
    }

    /// Points outside the raster are not drivable.
    pub fn is_drivable(&self, p: Vec2) -> bool {
        let rel = (p - self.origin) / self.cell_size;
        if !(rel.x >= 0.0 && rel.y >= 0.0) {
            return false;
        }
        let (c, r) = (rel.x as usize, rel.y as usize);
        c < self.cols && r < self.rows && self.drivable[r * self.cols + c]
    }
}

#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ConflictArea {
    pub id: u32,
    pub polygon: Vec<Vec2>,
}

impl ConflictArea {
    pub fn new(id: u32, polygon: Vec<Vec2>) -> Result<Self> {
        if polygon.len() < 3 || !(polygon_signed_area(&polygon).abs() > 0.0) {
            return Err(Error::InvalidScene(format!("conflict area {id} has zero area")));
        }
        Ok(ConflictArea { id, polygon })
    }

    /// Axis-aligned rectangle `[x0, x1] × [y0, y1]`.
    pub fn rect(id: u32, x0: f64, y0: f64, x1: f64, y1: f64) -> Result<Self> {
        Self::new(
            id,
            alloc::vec![Vec2::new(x0, y0), Vec2::new(x1, y0), Vec2::new(x1, y1), Vec2::new(x0, y1)],
        )
    }
}

/// All actors at one time instant.
#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Scene {
    pub t: f64,
    pub actors: Vec<ActorState>,
    pub conflict_areas: Vec<ConflictArea>,
    pub static_objects: Vec<Vec<Vec2>>,
    pub drivable_area: Option<OccupancyGrid>,
}

impl Scene {
    pub fn new(t: f64, actors: Vec<ActorState>) -> Result<Self> {
        for (i, a) in actors.iter().enumerate() {
            a.validate()?;
            if a.t != t {
                return Err(Error::InvalidScene(format!(
                    "actor {} timestamp {} differs from scene time {t}",
                    a.id, a.t
                )));
            }
            if actors[..i].iter().any(|b| b.id == a.id) {
                return Err(Error::InvalidScene(format!("duplicate actor id {}", a.id)));
            }
        }
        Ok(Scene {
            t,
            actors,
            conflict_areas: Vec::new(),
            static_objects: Vec::new(),
            drivable_area: None,
        })
    }

    pub fn with_conflict_area(mut self, ca: ConflictArea) -> Self {
        self.conflict_areas.push(ca);
        self
    }

    pub fn with_static_object(mut self, polygon: Vec<Vec2>) -> Self {
        self.static_objects.push(polygon);
        self
    }

    pub fn with_drivable_area(mut self, grid: OccupancyGrid) -> Self {
        self.drivable_area = Some(grid);
        self
    }

    pub fn actor(&self, id: ActorId) -> Result<&ActorState> {
        self.actors.iter().find(|a| a.id == id).ok_or(Error::MissingActor(id))
    }

    pub fn conflict_area(&self, id: u32) -> Result<&ConflictArea> {
        self.conflict_areas
            .iter()
            .find(|c| c.id == id)
            .ok_or(Error::UnknownConflictArea(id))
    }

    pub fn others(&self, id: ActorId) -> impl Iterator<Item = &ActorState> {
        self.actors.iter().filter(move |a| a.id != id)
    }
}

/// A recorded collision with optional speeds and masses.
#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct AccidentEvent {
    pub t: f64,
    pub actors: (ActorId, ActorId),
    pub pre_speeds: Option<(f64, f64)>,
    pub post_speeds: Option<(f64, f64)>,
    pub masses: Option<(f64, f64)>,
}

/// Time-ordered sequence of scenes.
#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Scenario {
    pub scenes: Vec<Scene>,
    pub accident_events: Vec<AccidentEvent>,
}

impl Scenario {
    pub fn new(scenes: Vec<Scene>) -> Result<Self> {
        if scenes.len() < 2 {
            return Err(Error::InvalidScenario("at least two scenes are required".into()));
        }
        for w in scenes.windows(2) {
            if !(w[1].t > w[0].t) {
                return Err(Error::InvalidScenario(format!(
                    "timestamps not strictly increasing at t = {}",
                    w[1].t
                )));
            }
        }
        Ok(Scenario { scenes, accident_events: Vec::new() })
    }

    pub fn with_accident_event(mut self, e: AccidentEvent) -> Self {
        self.accident_events.push(e);
        self
    }

    pub fn t_0(&self) -> f64 {
        self.scenes[0].t
    }

    pub fn t_e(&self) -> f64 {
        self.scenes[self.scenes.len() - 1].t
    }

    pub fn times(&self) -> Vec<f64> {
        self.scenes.iter().map(|s| s.t).collect()
    }

    /// Fills missing jerk vectors by central differencing of acceleration over
    /// `window` samples on each side (one-sided at the ends of an actor's presence).
    pub fn with_derived_jerk(mut self, window: usize) -> Self {
        let window = window.max(1);
        let n = self.scenes.len();
        let mut ids: Vec<ActorId> = self.scenes.iter().flat_map(|s| s.actors.iter().map(|a| a.id)).collect();
        ids.sort();
        ids.dedup();
        for id in ids {
            let track: Vec<Option<(f64, Vec2)>> = self
                .scenes
                .iter()
                .map(|s| s.actor(id).ok().map(|a| (s.t, a.acceleration)))
                .collect();
            for i in 0..n {
                if track[i].is_none() {
                    continue;
                }
                let mut lo = i;
                while lo > 0 && i - lo < window && track[lo - 1].is_some() {
                    lo -= 1;
                }
                let mut hi = i;
                while hi + 1 < n && hi - i < window && track[hi + 1].is_some() {
                    hi += 1;
                }
                let jerk = match (track[lo], track[hi]) {
                    (Some((t0, a0)), Some((t1, a1))) if t1 > t0 => (a1 - a0) / (t1 - t0),
                    _ => Vec2::ZERO,
                };
                if let Some(a) = self.scenes[i].actors.iter_mut().find(|a| a.id == id) {
                    if a.jerk.is_none() {
                        a.jerk = Some(jerk);
                    }
                }
            }
        }
        self
    }

    /// The states of one actor over time, skipping scenes where it is absent.
    pub fn track(&self, id: ActorId) -> Vec<&ActorState> {
        self.scenes.iter().filter_map(|s| s.actor(id).ok()).collect()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum Scale {
    Nominal,
    Ordinal,
    Interval,
    Ratio,
}

impl Scale {
    pub fn as_str(self) -> &'static str {
        match self {
            Scale::Nominal => "nominal",
            Scale::Ordinal => "ordinal",
            Scale::Interval => "interval",
            Scale::Ratio => "ratio",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum Unit {
    TimeS,
    Time2S2,
    DistanceM,
    AccelMps2,
    JerkMps3,
    SpeedMps,
    EnergyJ,
    Probability,
    Count,
    Dimensionless,
    /// Time times squared speed, the unit of the pedestrian risk index.
    TimeSpeed2,
}

impl Unit {
    pub fn as_str(self) -> &'static str {
        match self {
            Unit::TimeS => "s",
            Unit::Time2S2 => "s^2",
            Unit::DistanceM => "m",
            Unit::AccelMps2 => "m/s^2",
            Unit::JerkMps3 => "m/s^3",
            Unit::SpeedMps => "m/s",
            Unit::EnergyJ => "J",
            Unit::Probability => "probability",
            Unit::Count => "count",
            Unit::Dimensionless => "1",
            Unit::TimeSpeed2 => "s*m^2/s^2",
        }
    }
}

/// Qualifier attached to a metric value.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum Flag {
    /// No avoiding action found down to the configured floor.
    Unavoidable,
    NoPredictedCollision,
    SafetyDistanceViolated,
    /// Occupancies of a conflict area overlap in time.
    Overlap,
    NoConflictPeriod,
    InfeasibleStart,
}

impl Flag {
    pub fn as_str(self) -> &'static str {
        match self {
            Flag::Unavoidable => "unavoidable",
            Flag::NoPredictedCollision => "no_predicted_collision",
            Flag::SafetyDistanceViolated => "safety_distance_violated",
            Flag::Overlap => "overlap",
            Flag::NoConflictPeriod => "no_conflict_period",
            Flag::InfeasibleStart => "infeasible_start",
        }
    }
}

/// A value with an optional qualifying flag.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Flagged<T> {
    pub value: T,
    pub flag: Option<Flag>,
}

impl<T> Flagged<T> {
    pub fn plain(value: T) -> Self {
        Flagged { value, flag: None }
    }

    pub fn flagged(value: T, flag: Flag) -> Self {
        Flagged { value, flag: Some(flag) }
    }
}

#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(untagged))]
pub enum MetricValue {
    /// Extended real: finite, `+inf` or `-inf`.
    Real(f64),
    Label(String),
}

impl fmt::Display for MetricValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MetricValue::Real(v) => write!(f, "{v}"),
            MetricValue::Label(s) => f.write_str(s),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct MetricResult {
    pub metric: MetricId,
    pub value: MetricValue,
    pub scale: Scale,
    pub unit: Unit,
    pub subjects: Vec<ActorId>,
    pub flag: Option<Flag>,
}

impl MetricResult {
    /// Real-valued result with the metric's declared scale and unit.
    pub fn real(metric: MetricId, value: f64, subjects: Vec<ActorId>) -> Result<Self> {
        let unit = metric.unit();
        if unit == Unit::Probability && !(0.0..=1.0).contains(&value) {
            return Err(Error::InvalidParameter(format!(
                "{} value {value} outside [0, 1]",
                metric.as_str()
            )));
        }
        if value.is_nan() {
            return Err(Error::NonFinite);
        }
        Ok(MetricResult {
            metric,
            value: MetricValue::Real(value),
            scale: metric.scale(),
            unit,
            subjects,
            flag: None,
        })
    }

    pub fn from_flagged(metric: MetricId, v: Flagged<f64>, subjects: Vec<ActorId>) -> Result<Self> {
        let mut r = Self::real(metric, v.value, subjects)?;
        r.flag = v.flag;
        Ok(r)
    }

    pub fn with_flag(mut self, flag: Option<Flag>) -> Self {
        self.flag = flag;
        self
    }

    pub fn as_f64(&self) -> Option<f64> {
        match self.value {
            MetricValue::Real(v) => Some(v),
            MetricValue::Label(_) => None,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn scene_rejects_duplicate_ids() {
        let a = ActorState::new(1, 0.0, Vec2::ZERO, Vec2::ZERO);
        assert!(Scene::new(0.0, alloc::vec![a.clone(), a]).is_err());
    }

    #[test]
    fn scene_rejects_time_mismatch() {
        let a = ActorState::new(1, 0.5, Vec2::ZERO, Vec2::ZERO);
        assert!(Scene::new(0.0, alloc::vec![a]).is_err());
    }

    #[test]
    fn actor_validation() {
        let a = ActorState::new(1, 0.0, Vec2::ZERO, Vec2::ZERO);
        assert!(a.clone().with_size(0.0, 2.0).validate().is_err());
        assert!(a.clone().with_mass(-1.0).validate().is_err());
        assert!(a.clone().with_reaction_time(-0.1).validate().is_err());
        assert!(a.validate().is_ok());
    }

    #[test]
    fn capability_invariants() {
        let mut c = CapabilityEnvelope::default();
        assert!(c.validate().is_ok());
        c.a_long_min = 0.0;
        assert_eq!(c.validate(), Err(Error::InvalidCapability));
    }

    #[test]
    fn scenario_requires_increasing_time() {
        let s0 = Scene::new(0.0, Vec::new()).unwrap();
        let s1 = Scene::new(0.0, Vec::new()).unwrap();
        assert!(Scenario::new(alloc::vec![s0, s1]).is_err());
    }

    #[test]
    fn derived_jerk_of_linear_acceleration() {
        let scenes = (0..5)
            .map(|k| {
                let t = k as f64 * 0.1;
                let a = ActorState::new(1, t, Vec2::ZERO, Vec2::new(10.0, 0.0))
                    .with_acceleration(Vec2::new(2.0 * t, 0.0));
                Scene::new(t, alloc::vec![a]).unwrap()
            })
            .collect();
        let sc = Scenario::new(scenes).unwrap().with_derived_jerk(1);
        for s in &sc.scenes {
            let j = s.actors[0].jerk.unwrap();
            assert!((j.x - 2.0).abs() < 1e-9);
        }
    }

    #[test]
    fn probability_results_are_range_checked() {
        assert!(MetricResult::real(MetricId::Cpi, 1.5, Vec::new()).is_err());
        assert!(MetricResult::real(MetricId::Cpi, 0.5, Vec::new()).is_ok());
    }

    #[test]
    fn grid_lookup() {
        let mut g = OccupancyGrid::all_drivable(Vec2::ZERO, 1.0, 4, 2);
        g.set(1, 0, false);
        assert!(g.is_drivable(Vec2::new(0.5, 0.5)));
        assert!(!g.is_drivable(Vec2::new(1.5, 0.5)));
        assert!(!g.is_drivable(Vec2::new(-0.1, 0.5)));
        assert!(!g.is_drivable(Vec2::new(4.5, 0.5)));
    }
}
