//! Markov-chain abstraction of one-dimensional path motion.
//!
//! The state space is partitioned into cells `X_i = S_e × V_m` (path
//! position × speed); the input space into acceleration intervals `α`.
//! Transition probabilities are volume fractions of the reachable set of a
//! cell that land in each target cell.

use alloc::format;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::models::kinematics::brake_1d;
use crate::rng;

/// Column-stochastic tolerance.
pub const STOCHASTIC_TOL: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq)]
pub struct StateGrid {
    /// Path-position cell edges, strictly increasing.
    pub pos_edges: Vec<f64>,
    /// Speed cell edges, non-decreasing (zero-width cells hold a single speed).
    pub vel_edges: Vec<f64>,
}

impl StateGrid {
    pub fn n_pos(&self) -> usize {
        self.pos_edges.len().saturating_sub(1)
    }

    pub fn n_vel(&self) -> usize {
        self.vel_edges.len().saturating_sub(1)
    }

    pub fn len(&self) -> usize {
        self.n_pos() * self.n_vel()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn index(&self, e: usize, m: usize) -> usize {
        e * self.n_vel() + m
    }

    fn validate(&self) -> Result<()> {
        if self.n_pos() == 0 || self.n_vel() == 0 {
            return Err(Error::DegeneratePartition("grid needs at least one cell".into()));
        }
        for w in self.pos_edges.windows(2) {
            if !(w[1] > w[0]) {
                return Err(Error::DegeneratePartition(format!("position cell [{}, {}]", w[0], w[1])));
            }
        }
        for w in self.vel_edges.windows(2) {
            if !(w[1] >= w[0]) {
                return Err(Error::DegeneratePartition(format!("speed cell [{}, {}]", w[0], w[1])));
            }
        }
        Ok(())
    }

    /// Cell containing `(s, v)`; values outside the grid fall into the boundary cells.
    pub fn locate(&self, s: f64, v: f64) -> usize {
        self.index(bin(&self.pos_edges, s), bin(&self.vel_edges, v))
    }
}

fn bin(edges: &[f64], x: f64) -> usize {
    let n = edges.len() - 1;
    let k = edges.partition_point(|e| *e <= x);
    k.saturating_sub(1).min(n - 1)
}

/// How reachable-set volumes are estimated.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum VolumeSampling {
    /// Deterministic midpoint lattice with about `n` points per cell and input.
    Lattice(usize),
    /// Uniform random points, reproducible through `seed`.
    MonteCarlo { n: usize, seed: u64 },
}

impl Default for VolumeSampling {
    fn default() -> Self {
        VolumeSampling::Lattice(10_000)
    }
}

/// Stop-aware double integrator `(s, v, a, t) -> (s', v')`.
pub fn double_integrator(s: f64, v: f64, a: f64, t: f64) -> (f64, f64) {
    let (ds, v1) = brake_1d(v, a, t);
    (s + ds, v1.max(0.0))
}

#[derive(Clone, Debug, PartialEq)]
pub struct MarkovChainModel {
    pub n_pos: usize,
    pub n_vel: usize,
    /// Per input, `Φ^α(T)` as a dense matrix, entry `j * n + i` = P(i → j).
    pub phi_step: Vec<Vec<f64>>,
    /// Per input, `Φ^α([0, T])`.
    pub phi_interval: Vec<Vec<f64>>,
    /// Probability of each input interval.
    pub policy: Vec<f64>,
}

impl MarkovChainModel {
    /// Single-input chain from hand-built matrices.
    pub fn from_matrices(n_pos: usize, n_vel: usize, phi_step: Vec<f64>, phi_interval: Vec<f64>) -> Result<Self> {
        let m = MarkovChainModel {
            n_pos,
            n_vel,
            phi_step: alloc::vec![phi_step],
            phi_interval: alloc::vec![phi_interval],
            policy: alloc::vec![1.0],
        };
        m.validate()?;
        Ok(m)
    }

    pub fn n(&self) -> usize {
        self.n_pos * self.n_vel
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.n();
        if self.phi_step.len() != self.policy.len() || self.phi_interval.len() != self.policy.len() {
            return Err(Error::NotStochastic("matrix count does not match the input policy".into()));
        }
        let psum: f64 = self.policy.iter().sum();
        if self.policy.iter().any(|p| !(*p >= 0.0)) || (psum - 1.0).abs() > STOCHASTIC_TOL {
            return Err(Error::NotNormalized(psum));
        }
        for m in self.phi_step.iter().chain(&self.phi_interval) {
            if m.len() != n * n {
                return Err(Error::NotStochastic(format!("expected {n}x{n} matrix")));
            }
            for i in 0..n {
                let mut sum = 0.0;
                for j in 0..n {
                    let p = m[j * n + i];
                    if !(p >= 0.0) {
                        return Err(Error::NotStochastic(format!("negative entry in column {i}")));
                    }
                    sum += p;
                }
                if (sum - 1.0).abs() > STOCHASTIC_TOL {
                    return Err(Error::NotStochastic(format!("column {i} sums to {sum}")));
                }
            }
        }
        Ok(())
    }

    fn mix(&self, mats: &[Vec<f64>]) -> Vec<f64> {
        let n = self.n();
        let mut out = alloc::vec![0.0; n * n];
        for (m, w) in mats.iter().zip(&self.policy) {
            for (o, v) in out.iter_mut().zip(m) {
                *o += w * v;
            }
        }
        out
    }

    /// Policy-weighted `Φ(T)`.
    pub fn step_matrix(&self) -> Vec<f64> {
        self.mix(&self.phi_step)
    }

    /// Policy-weighted `Φ([0, T])`.
    pub fn interval_matrix(&self) -> Vec<f64> {
        self.mix(&self.phi_interval)
    }

    /// Distribution after one step.
    pub fn propagate(&self, p: &[f64]) -> Vec<f64> {
        mat_vec(&self.step_matrix(), p)
    }

    /// Occupancy distribution over the interval following `p`.
    pub fn interval_distribution(&self, p: &[f64]) -> Vec<f64> {
        mat_vec(&self.interval_matrix(), p)
    }
}

pub fn mat_vec(m: &[f64], p: &[f64]) -> Vec<f64> {
    let n = p.len();
    (0..n).map(|j| (0..n).map(|i| m[j * n + i] * p[i]).sum()).collect()
}

/// Markov abstraction of `dynamics` over one step `t_step`.
///
/// `inputs` are acceleration intervals; `policy` defaults to uniform.
/// The interval matrix pools the reachable points at `interval_substeps + 1`
/// equally spaced times in `[0, t_step]`.
pub fn build_markov_model(
    dynamics: &dyn Fn(f64, f64, f64, f64) -> (f64, f64),
    grid: &StateGrid,
    inputs: &[(f64, f64)],
    t_step: f64,
    policy: Option<Vec<f64>>,
    sampling: VolumeSampling,
    interval_substeps: usize,
) -> Result<MarkovChainModel> {
    grid.validate()?;
    if inputs.is_empty() {
        return Err(Error::DegeneratePartition("no input intervals".into()));
    }
    if inputs.iter().any(|(lo, hi)| !(hi >= lo)) {
        return Err(Error::DegeneratePartition("input interval with negative width".into()));
    }
    if !(t_step > 0.0) {
        return Err(Error::InvalidParameter("time step must be positive".into()));
    }
    let policy = policy.unwrap_or_else(|| alloc::vec![1.0 / inputs.len() as f64; inputs.len()]);
    let n = grid.len();
    let substeps = interval_substeps.max(1);
    let mut phi_step = Vec::with_capacity(inputs.len());
    let mut phi_interval = Vec::with_capacity(inputs.len());
    for (alpha, &(a_lo, a_hi)) in inputs.iter().enumerate() {
        let mut step = alloc::vec![0.0; n * n];
        let mut interval = alloc::vec![0.0; n * n];
        for e in 0..grid.n_pos() {
            for m in 0..grid.n_vel() {
                let i = grid.index(e, m);
                let bounds = [
                    (grid.pos_edges[e], grid.pos_edges[e + 1]),
                    (grid.vel_edges[m], grid.vel_edges[m + 1]),
                    (a_lo, a_hi),
                ];
                let points = sample_box(&bounds, sampling, (i * inputs.len() + alpha) as u64);
                if points.is_empty() {
                    return Err(Error::DegeneratePartition(format!("cell {i} input {alpha}")));
                }
                let w = 1.0 / points.len() as f64;
                let wi = 1.0 / (points.len() * (substeps + 1)) as f64;
                for [s, v, a] in points {
                    let (s1, v1) = dynamics(s, v, a, t_step);
                    step[grid.locate(s1, v1) * n + i] += w;
                    for k in 0..=substeps {
                        let tk = t_step * k as f64 / substeps as f64;
                        let (sk, vk) = dynamics(s, v, a, tk);
                        interval[grid.locate(sk, vk) * n + i] += wi;
                    }
                }
            }
        }
        phi_step.push(step);
        phi_interval.push(interval);
    }
    let model = MarkovChainModel { n_pos: grid.n_pos(), n_vel: grid.n_vel(), phi_step, phi_interval, policy };
    model.validate()?;
    Ok(model)
}

fn sample_box(bounds: &[(f64, f64); 3], sampling: VolumeSampling, key: u64) -> Vec<[f64; 3]> {
    match sampling {
        VolumeSampling::Lattice(target) => {
            let dims = bounds.iter().filter(|(lo, hi)| hi > lo).count().max(1);
            let mut k = 1usize;
            while k.pow(dims as u32) < target.max(1) {
                k += 1;
            }
            let counts: Vec<usize> = bounds.iter().map(|(lo, hi)| if hi > lo { k } else { 1 }).collect();
            let coord = |d: usize, idx: usize| {
                let (lo, hi) = bounds[d];
                lo + (hi - lo) * (idx as f64 + 0.5) / counts[d] as f64
            };
            let mut out = Vec::with_capacity(counts.iter().product());
            for x in 0..counts[0] {
                for y in 0..counts[1] {
                    for z in 0..counts[2] {
                        out.push([coord(0, x), coord(1, y), coord(2, z)]);
                    }
                }
            }
            out
        }
        VolumeSampling::MonteCarlo { n, seed } => {
            let mut r = rng::stream(seed, key);
            (0..n)
                .map(|_| {
                    let mut p = [0.0; 3];
                    for (d, (lo, hi)) in bounds.iter().enumerate() {
                        p[d] = lo + (hi - lo) * rng::unit(&mut r);
                    }
                    p
                })
                .collect()
        }
    }
}
