//! Evaluation of configured metrics on scenes and scenarios.

use std::collections::BTreeSet;

use criticality::models::markov::MarkovChainModel;
use criticality::models::potential::{Gaussian, PotentialField};
use criticality::models::{ManeuverModel, Trajectory};
use criticality::probabilistic::{aci, p_mc, p_smh, srs_along_path, Hypotheses, PathChain, PmcConfig};
use criticality::rng::derive_seed;
use criticality::scenario;
use criticality::scene::misc::{BrakeToStop, NormOrder};
use criticality::scene::{self as sm, Target};
use criticality::{ActorClass, ActorId, Flagged, MetricContext, MetricId, Scenario, Scene};

use crate::config::{Level, MetricSpec, RunConfig};
use crate::error::Result;
use crate::trajectories::Recording;

type Value = criticality::Result<Flagged<f64>>;

fn plain(v: criticality::Result<f64>) -> Value {
    v.map(Flagged::plain)
}

/// Metric context plus per-metric state prepared once per run.
#[derive(Debug)]
pub struct Evaluator<'a> {
    pub config: &'a RunConfig,
    pub ctx: MetricContext,
    /// Markov chains of the P-SRS metrics, by metric index.
    chains: Vec<Option<(PathChain, MarkovChainModel)>>,
}

impl<'a> Evaluator<'a> {
    pub fn new(config: &'a RunConfig) -> Result<Self> {
        let chains = config
            .metrics
            .iter()
            .map(|m| {
                if m.id != MetricId::PSrs {
                    return Ok(None);
                }
                let setup = m.path_chain.clone().unwrap_or_default();
                let chain = setup.build()?;
                Ok(Some((setup, chain)))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Evaluator { config, ctx: config.context()?, chains })
    }

    /// Attaches the configured conflict areas and actor defaults and derives
    /// jerk where it is missing.
    pub fn prepare(&self, recording: &Recording) -> Result<Scenario> {
        let areas = self.config.conflict_areas.iter().map(|a| a.area()).collect::<Result<Vec<_>>>()?;
        let mut scenario = recording.scenario.clone();
        for s in &mut scenario.scenes {
            s.conflict_areas.extend(areas.iter().cloned());
            for a in &mut s.actors {
                if let Some(c) = self.config.capabilities {
                    a.capabilities = c;
                }
                a.reaction_time.get_or_insert(self.config.reaction_time);
            }
        }
        Ok(scenario.with_derived_jerk(self.config.jerk_window))
    }

    /// Subjects `(A1, A2)` of a pair metric in a scene.
    pub fn scene_pairs(&self, spec: &MetricSpec, scene: &Scene) -> Vec<(ActorId, ActorId)> {
        let ids: Vec<ActorId> = scene.actors.iter().map(|a| a.id).collect();
        pairs(spec, &ids)
    }

    pub fn scene_actors(&self, spec: &MetricSpec, scene: &Scene) -> Vec<ActorId> {
        let ids: Vec<ActorId> = scene.actors.iter().map(|a| a.id).collect();
        subjects(spec, &ids)
    }

    /// Value of a scene metric for A1 (and A2 for pair metrics).
    pub fn scene_value(&self, index: usize, scene: &Scene, recording: &str, a1: ActorId, a2: Option<ActorId>) -> Value {
        let spec = &self.config.metrics[index];
        match a2 {
            Some(a2) => self.pair_value(index, spec, scene, a1, a2),
            None => self.actor_value(spec, scene, recording, a1),
        }
    }

    fn pair_value(&self, index: usize, spec: &MetricSpec, scene: &Scene, a1: ActorId, a2: ActorId) -> Value {
        use MetricId::*;
        let ctx = &self.ctx;
        match spec.id {
            Ttc => plain(sm::ttc(ctx, scene, a1, a2)),
            Pttc => plain(sm::pttc(ctx, scene, a1, a2)),
            Thw => plain(sm::thw(ctx, scene, a1, a2)),
            Hw => plain(sm::hw(ctx, scene, a1, a2)),
            Dce => plain(sm::dce_ttce(ctx, scene, a1, a2).map(|r| r.0)),
            Ttce => plain(sm::dce_ttce(ctx, scene, a1, a2).map(|r| r.1)),
            Pret => plain(sm::pret(ctx, scene, a1, a2)),
            Spret => plain(sm::spret(ctx, scene, a1, a2)),
            Ta => plain(sm::ta(ctx, scene, a1, a2)),
            Tto => plain(sm::tto(ctx, scene, a1, Target::Actor(a2))),
            ALongReq => sm::a_long_req(ctx, scene, a1, a2),
            ALatReq => sm::a_lat_req(ctx, scene, a1, a2),
            AReq => sm::a_req(ctx, scene, a1, a2),
            AReqCond => sm::a_req_cond(ctx, scene, a1, a2),
            Btn => sm::btn(ctx, scene, a1, a2),
            Stn => sm::stn(ctx, scene, a1, a2),
            Dst => sm::dst(ctx, scene, a1, a2, spec.t_s),
            Ttb => sm::ttm(ctx, scene, a1, a2, &ManeuverModel::brake()),
            Tts => sm::ttr(
                ctx,
                scene,
                a1,
                a2,
                &[ManeuverModel::SteerLeft { lateral_acceleration: None }, ManeuverModel::SteerRight { lateral_acceleration: None }],
            ),
            Ttk => sm::ttm(ctx, scene, a1, a2, &ManeuverModel::Kickdown { acceleration: None }),
            Ttm => {
                let m = spec.maneuver.map_or_else(ManeuverModel::brake, |m| m.model());
                sm::ttm(ctx, scene, a1, a2, &m)
            }
            Ttr => {
                let maneuvers: Vec<ManeuverModel> = match &spec.maneuvers {
                    Some(list) => list.iter().map(|m| m.model()).collect(),
                    None => vec![
                        ManeuverModel::brake(),
                        ManeuverModel::SteerLeft { lateral_acceleration: None },
                        ManeuverModel::SteerRight { lateral_acceleration: None },
                        ManeuverModel::Kickdown { acceleration: None },
                    ],
                };
                sm::ttr(ctx, scene, a1, a2, &maneuvers)
            }
            Wttc => {
                let model = spec.trace_set.unwrap_or_default().model();
                let (s1, s2) = (scene.actor(a1)?, scene.actor(a2)?);
                let set1 = model.generate(s1, &ctx.predictor)?;
                let set2 = model.generate(s2, &ctx.predictor)?;
                plain(sm::wttc(ctx, s1, &set1, s2, &set2))
            }
            Sp => {
                let k = match &spec.norm {
                    Some(n) => n.order().map_err(|e| criticality::Error::InvalidParameter(e.to_string()))?,
                    None => NormOrder::Finite(2),
                };
                let brake = BrakeToStop::default();
                plain(sm::sp(ctx, scene, a1, a2, (&brake, &brake), k))
            }
            DeltaV => plain(scenario::delta_v(scene, a1, a2)),
            JokschFatality => plain(scenario::delta_v(scene, a1, a2).map(scenario::joksch_fatality)),
            PSmh => {
                let model = spec.trace_set.unwrap_or_default().model();
                let (s1, s2) = (scene.actor(a1)?, scene.actor(a2)?);
                let ego = Hypotheses::from_set(&model.generate(s1, &ctx.predictor)?)?;
                let other = Hypotheses::from_set(&model.generate(s2, &ctx.predictor)?)?;
                let joint: Vec<(Vec<Trajectory>, f64)> = other.members().iter().map(|(t, p)| (vec![t.clone()], *p)).collect();
                plain(p_smh(ctx, s1, &ego, std::slice::from_ref(s2), &Hypotheses::new(joint)?))
            }
            PSrs => {
                let (setup, chain) = self.chains[index].as_ref().expect("chain built for every P-SRS metric");
                plain(srs_along_path(ctx, scene, a1, a2, setup, chain))
            }
            Aci => {
                let tree = spec.tree.as_ref().ok_or(criticality::Error::MissingField("tree".into()))?;
                let mut lookup = |m: MetricId| -> criticality::Result<f64> {
                    let bare = MetricSpec::bare(m);
                    let v = match Level::of(m) {
                        Level::ScenePair if m != Aci => self.pair_value(index, &bare, scene, a1, a2)?,
                        Level::SceneActor => self.actor_value(&bare, scene, "", a1)?,
                        _ => return Err(criticality::Error::InvalidParameter(format!("{m} cannot condition a collision tree"))),
                    };
                    Ok(v.value)
                };
                plain(aci(tree, &mut lookup))
            }
            other => Err(criticality::Error::InvalidParameter(format!("{other} is not a pair scene metric"))),
        }
    }

    fn actor_value(&self, spec: &MetricSpec, scene: &Scene, recording: &str, a1: ActorId) -> Value {
        use MetricId::*;
        let ctx = &self.ctx;
        let ca = || spec.conflict_area.ok_or(criticality::Error::MissingField("conflict_area".into()));
        match spec.id {
            LatJ => plain(sm::jerk(scene, a1).map(|j| j.0)),
            LongJ => plain(sm::jerk(scene, a1).map(|j| j.1)),
            Msd => plain(sm::msd(scene, a1)),
            Psd => plain(sm::psd(ctx, scene, a1, ca()?)),
            Ttz => plain(sm::tto(ctx, scene, a1, Target::ConflictArea(ca()?))),
            Ags => {
                let gap = spec.gap.ok_or(criticality::Error::MissingField("gap".into()))?.model();
                plain(sm::ags(ctx, scene, a1, gap.as_ref()))
            }
            Rss => plain(sm::rss_ds(ctx, scene, a1, &spec.safe_distance.unwrap_or_default())),
            Pf => {
                let fixed: Vec<Box<dyn PotentialField>> = spec.potentials.iter().map(|p| p.field()).collect();
                let bump = spec.actor_potential.unwrap_or_default();
                let actors: Vec<Gaussian> = scene
                    .others(a1)
                    .map(|o| Gaussian { center: o.position, amplitude: bump.amplitude, sigma: bump.sigma })
                    .collect();
                let all: Vec<&dyn PotentialField> = fixed
                    .iter()
                    .map(|b| b.as_ref())
                    .chain(actors.iter().map(|g| g as &dyn PotentialField))
                    .collect();
                plain(sm::pf_eval(scene, a1, &all))
            }
            Tci => sm::tci(ctx, scene, a1, &spec.tci.clone().unwrap_or_default()),
            PMc => {
                let sampler = spec.sampler.unwrap_or_default();
                let cfg = PmcConfig {
                    samples: spec.samples.unwrap_or(PmcConfig::default().samples),
                    seed: row_seed(self.config.seed, recording, scene.t, a1),
                    goals: Vec::new(),
                };
                plain(p_mc(ctx, scene, a1, &sampler, &cfg).map(|e| e.probability))
            }
            other => Err(criticality::Error::InvalidParameter(format!("{other} is not an actor scene metric"))),
        }
    }

    /// Value of a scenario metric for the given subjects.
    pub fn scenario_value(&self, spec: &MetricSpec, scenario: &Scenario, a1: Option<ActorId>, a2: Option<ActorId>) -> Value {
        use MetricId::*;
        let ctx = &self.ctx;
        let need = |a: Option<ActorId>| a.ok_or(criticality::Error::TooFewActors);
        let ca = || spec.conflict_area.ok_or(criticality::Error::MissingField("conflict_area".into()));
        let detector = spec.detector.unwrap_or_default();
        match spec.id {
            Tet => plain(scenario::tet(ctx, scenario, need(a1)?, need(a2)?, spec.tau.unwrap_or(f64::NAN))),
            Tit => plain(scenario::tit(ctx, scenario, need(a1)?, need(a2)?, spec.tau.unwrap_or(f64::NAN))),
            Tta => plain(scenario::tta(ctx, scenario, need(a1)?, need(a2)?, &detector)),
            Cs => scenario::cs(ctx, scenario, need(a1)?, need(a2)?, &detector),
            Cpi => {
                let d = spec.capability.ok_or(criticality::Error::MissingField("capability".into()))?;
                plain(scenario::cpi(ctx, scenario, need(a1)?, need(a2)?, &d))
            }
            Pet => scenario::pet(ctx, scenario, need(a1)?, need(a2)?, ca()?),
            Ci => scenario::ci(ctx, scenario, need(a1)?, need(a2)?, ca()?, spec.alpha.unwrap_or(1.0), spec.beta.unwrap_or(1.0)),
            Pri => scenario::pri(ctx, scenario, need(a1)?, ca()?, need(a2)?),
            Et => plain(scenario::et(ctx, scenario, need(a1)?, ca()?)),
            Soi => plain(scenario::soi(scenario, need(a1)?, &spec.personal_space.unwrap_or_default())),
            Am => Ok(Flagged::plain(scenario::am(scenario))),
            other => Err(criticality::Error::InvalidParameter(format!("{other} is not a scenario metric"))),
        }
    }

    /// Subject tuples of a scenario metric.
    pub fn scenario_subjects(&self, spec: &MetricSpec, scenario: &Scenario) -> Vec<(Option<ActorId>, Option<ActorId>)> {
        let ids: Vec<ActorId> = scenario
            .scenes
            .iter()
            .flat_map(|s| s.actors.iter().map(|a| a.id))
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();
        match spec.level() {
            Level::ScenarioPair => {
                let mut p = pairs(spec, &ids);
                if spec.id == MetricId::Pri {
                    // the second subject is the pedestrian
                    p.retain(|(_, b)| {
                        scenario.scenes.iter().any(|s| s.actor(*b).is_ok_and(|a| a.class == ActorClass::Pedestrian))
                    });
                }
                p.into_iter().map(|(a, b)| (Some(a), Some(b))).collect()
            }
            Level::ScenarioActor => subjects(spec, &ids).into_iter().map(|a| (Some(a), None)).collect(),
            _ => vec![(None, None)],
        }
    }
}

fn subjects(spec: &MetricSpec, ids: &[ActorId]) -> Vec<ActorId> {
    match spec.ego {
        Some(e) => ids.iter().copied().filter(|a| a.0 == e).collect(),
        None => ids.to_vec(),
    }
}

fn pairs(spec: &MetricSpec, ids: &[ActorId]) -> Vec<(ActorId, ActorId)> {
    let mut out = Vec::new();
    for a in subjects(spec, ids) {
        for &b in ids.iter().filter(|b| **b != a) {
            out.push((a, b));
        }
    }
    out
}

/// Seed of one Monte Carlo evaluation, fixed by the run seed, the
/// recording, the scene time and the subject.
pub fn row_seed(seed: u64, recording: &str, t: f64, a1: ActorId) -> u64 {
    // FNV-1a over the recording id
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for b in recording.bytes() {
        h = (h ^ u64::from(b)).wrapping_mul(0x0100_0000_01b3);
    }
    derive_seed(derive_seed(derive_seed(seed, h), t.to_bits()), a1.0)
}
