//! Collision probability from a Markov chain abstraction of another actor
//! against an ego vehicle with known motion.

use alloc::vec::Vec;

#[allow(unused_imports)] // float methods come from std when it is linked
use num_traits::Float;

use crate::contact::DistanceMode;
use crate::error::{Error, Result};
use crate::geometry::{signed_separation, OrientedRect, Shape, Vec2};
use crate::models::markov::{build_markov_model, double_integrator, mat_vec, MarkovChainModel, StateGrid, VolumeSampling};
use crate::probabilistic::NORMALIZATION_TOL;
use crate::scene::MetricContext;
use crate::types::{ActorId, Scene};

/// One time interval of the evaluation.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct SrsInterval {
    /// Occupancy probability of each ego cell during the interval.
    pub ego: Vec<f64>,
    /// Index tuples `(ego cell, path cell, deviation cell)` whose bodies intersect.
    pub omega: Vec<(usize, usize, usize)>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SrsInput<'a> {
    pub chain: &'a MarkovChainModel,
    /// Distribution over chain states at the start.
    pub initial: Vec<f64>,
    /// Probability of each lateral deviation cell.
    pub deviation: Vec<f64>,
    /// Consecutive intervals, one per chain step.
    pub intervals: Vec<SrsInterval>,
}

fn check_distribution(p: &[f64], what: &str) -> Result<()> {
    if p.iter().any(|x| !(*x >= 0.0)) {
        return Err(Error::InvalidParameter(alloc::format!("negative {what} probability")));
    }
    let sum: f64 = p.iter().sum();
    if (sum - 1.0).abs() > NORMALIZATION_TOL {
        return Err(Error::NotNormalized(sum));
    }
    Ok(())
}

/// Probability of each path cell: the interval distribution summed over speeds.
fn path_marginal(chain: &MarkovChainModel, p: &[f64]) -> Vec<f64> {
    p.chunks(chain.n_vel).map(|c| c.iter().sum()).collect()
}

/// Per interval `k`, `Σ_{(g,e,f) ∈ Ω_k} p̂_g p_e^path p_f^dev`, with the
/// occupancy over the interval taken from `Φ([0, T])` applied to the state
/// distribution at its start.
///
/// The colliding share of each path cell is removed from the state
/// distribution before the next step, so a collision is counted once. The
/// sum over intervals is clamped to `[0, 1]`.
pub fn p_srs(input: &SrsInput) -> Result<f64> {
    let chain = input.chain;
    chain.validate()?;
    let n = chain.n();
    if input.initial.len() != n {
        return Err(Error::InvalidParameter("initial distribution does not match the chain".into()));
    }
    check_distribution(&input.initial, "state")?;
    check_distribution(&input.deviation, "deviation")?;
    let phi_step = chain.step_matrix();
    let phi_interval = chain.interval_matrix();
    let mut state = input.initial.clone();
    let mut total = 0.0;
    for interval in &input.intervals {
        let occupancy = path_marginal(chain, &mat_vec(&phi_interval, &state));
        // colliding fraction of each path cell
        let mut share = alloc::vec![0.0; chain.n_pos];
        for &(g, e, f) in &interval.omega {
            let pg = *interval.ego.get(g).ok_or_else(|| Error::InvalidParameter("ego cell out of range".into()))?;
            let pf = *input.deviation.get(f).ok_or_else(|| Error::InvalidParameter("deviation cell out of range".into()))?;
            *share.get_mut(e).ok_or_else(|| Error::InvalidParameter("path cell out of range".into()))? += pg * pf;
        }
        total += share.iter().zip(&occupancy).map(|(c, p)| c * p).sum::<f64>();
        state = mat_vec(&phi_step, &state);
        for (e, c) in share.iter().enumerate() {
            let keep = (1.0 - c).clamp(0.0, 1.0);
            for m in 0..chain.n_vel {
                state[e * chain.n_vel + m] *= keep;
            }
        }
    }
    Ok(total.clamp(0.0, 1.0))
}

/// Discretization of another actor's motion along a straight path in its
/// heading direction, for [`srs_along_path`].
#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(default))]
pub struct PathChain {
    pub cell_length: f64,
    pub path_cells: usize,
    pub speed_cells: usize,
    pub v_max: f64,
    /// Acceleration intervals, chosen with equal probability.
    pub inputs: Vec<(f64, f64)>,
    pub t_step: f64,
    /// Lattice points per cell and input for the transition volumes.
    pub lattice: usize,
    pub substeps: usize,
}

impl Default for PathChain {
    fn default() -> Self {
        PathChain {
            cell_length: 2.0,
            path_cells: 60,
            speed_cells: 8,
            v_max: 24.0,
            inputs: alloc::vec![(-6.0, -2.0), (-2.0, 1.0), (1.0, 3.0)],
            t_step: 0.5,
            lattice: 1000,
            substeps: 4,
        }
    }
}

impl PathChain {
    pub fn grid(&self) -> StateGrid {
        let edges = |n: usize, w: f64| (0..=n).map(|k| k as f64 * w).collect();
        StateGrid {
            pos_edges: edges(self.path_cells, self.cell_length),
            vel_edges: edges(self.speed_cells, self.v_max / self.speed_cells as f64),
        }
    }

    pub fn build(&self) -> Result<MarkovChainModel> {
        build_markov_model(
            &double_integrator,
            &self.grid(),
            &self.inputs,
            self.t_step,
            None,
            VolumeSampling::Lattice(self.lattice),
            self.substeps,
        )
    }
}

/// P-SRS with A2 abstracted by `chain` (built from `setup`) along a straight
/// path from its position in its heading direction, and A1 following its
/// nominal prediction.
///
/// A path cell collides in an interval when its body, the cell extended by
/// A2's length and with A2's width, overlaps A1 at any of the interval's
/// sub-sample times. In center mode A1 is a point and the cell is not extended.
pub fn srs_along_path(
    ctx: &MetricContext,
    scene: &Scene,
    a1: ActorId,
    a2: ActorId,
    setup: &PathChain,
    chain: &MarkovChainModel,
) -> Result<f64> {
    let (ego, other) = (scene.actor(a1)?, scene.actor(a2)?);
    let grid = setup.grid();
    if chain.n_pos != grid.n_pos() || chain.n_vel != grid.n_vel() {
        return Err(Error::InvalidParameter("chain does not match the path discretization".into()));
    }
    let mut initial = alloc::vec![0.0; grid.len()];
    initial[grid.locate(0.0, other.v_long().max(0.0))] = 1.0;
    let dir = other.heading();
    let footprint = ctx.mode() == DistanceMode::Footprint;
    let extend = if footprint { other.length } else { 0.0 };
    let cells: Vec<(Vec2, f64, Shape)> = (0..grid.n_pos())
        .map(|e| {
            let mid = 0.5 * (grid.pos_edges[e] + grid.pos_edges[e + 1]);
            let center = other.position + dir * mid;
            let rect = OrientedRect::new(center, other.yaw, setup.cell_length + extend, other.width);
            let radius = 0.5 * (setup.cell_length + extend).hypot(other.width);
            (center, radius, Shape::Polygon(rect.polygon()))
        })
        .collect();
    let ego_radius = if footprint { 0.5 * ego.length.hypot(ego.width) } else { 0.0 };
    let trajectory = ctx.predict(ego)?;
    let steps = (ctx.horizon() / setup.t_step + 1e-9).floor() as usize;
    let sub = setup.substeps.max(1);
    let mut intervals = Vec::with_capacity(steps);
    for k in 0..steps {
        let mut omega = Vec::new();
        let bodies: Vec<(Vec2, Shape)> = (0..=sub)
            .map(|j| {
                let p = trajectory.at(setup.t_step * (k as f64 + j as f64 / sub as f64));
                let body = if footprint {
                    Shape::Polygon(OrientedRect::new(p.position, p.heading, ego.length, ego.width).polygon())
                } else {
                    Shape::Point(p.position)
                };
                (p.position, body)
            })
            .collect();
        for (e, (center, radius, cell)) in cells.iter().enumerate() {
            let hit = bodies
                .iter()
                .any(|(p, b)| p.distance(*center) <= radius + ego_radius && signed_separation(b, cell) < 0.0);
            if hit {
                omega.push((0, e, 0));
            }
        }
        intervals.push(SrsInterval { ego: alloc::vec![1.0], omega });
    }
    p_srs(&SrsInput { chain, initial, deviation: alloc::vec![1.0], intervals })
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    /// Every state moves to the next cell, the last one stays.
    fn shift_chain() -> MarkovChainModel {
        let step = vec![
            0.0, 0.0, 0.0, //
            1.0, 0.0, 0.0, //
            0.0, 1.0, 1.0,
        ];
        MarkovChainModel::from_matrices(3, 1, step.clone(), step).unwrap()
    }

    #[test]
    fn deterministic_drive_into_ego_cell() {
        let chain = shift_chain();
        let input = SrsInput {
            chain: &chain,
            initial: vec![1.0, 0.0, 0.0],
            deviation: vec![1.0],
            intervals: vec![
                SrsInterval::default(),
                SrsInterval { ego: vec![1.0], omega: vec![(0, 2, 0)] },
                SrsInterval { ego: vec![1.0], omega: vec![(0, 2, 0)] },
            ],
        };
        // the actor reaches cell 2 in the second interval and is absorbed there
        assert_eq!(p_srs(&input).unwrap(), 1.0);
        let empty = SrsInput { intervals: vec![SrsInterval::default(); 3], ..input };
        assert_eq!(p_srs(&empty).unwrap(), 0.0);
    }

    #[test]
    fn rejects_bad_initial_distribution() {
        let chain = shift_chain();
        let input = SrsInput { chain: &chain, initial: vec![0.5, 0.0, 0.0], deviation: vec![1.0], intervals: vec![] };
        assert!(matches!(p_srs(&input), Err(Error::NotNormalized(_))));
    }

    #[test]
    fn path_chain_sees_obstacles_on_the_path_only() {
        use crate::models::{MotionModel, Predictor};
        use crate::types::ActorState;
        let setup = PathChain { path_cells: 30, lattice: 200, ..PathChain::default() };
        let chain = setup.build().unwrap();
        let ctx = MetricContext::new(Predictor::new(MotionModel::ConstantVelocity, 6.0, 0.05).unwrap(), Default::default());
        let scene = |y: f64| {
            Scene::new(
                0.0,
                vec![
                    ActorState::new(1, 0.0, Vec2::new(25.0, y), Vec2::ZERO).with_yaw(core::f64::consts::FRAC_PI_2),
                    ActorState::new(2, 0.0, Vec2::ZERO, Vec2::new(10.0, 0.0)),
                ],
            )
            .unwrap()
        };
        let blocked = srs_along_path(&ctx, &scene(0.0), ActorId(1), ActorId(2), &setup, &chain).unwrap();
        let clear = srs_along_path(&ctx, &scene(10.0), ActorId(1), ActorId(2), &setup, &chain).unwrap();
        assert!(blocked > 0.3 && blocked <= 1.0, "{blocked}");
        assert_eq!(clear, 0.0);
    }
}
