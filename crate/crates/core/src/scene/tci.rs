//! Trajectory criticality index: the least demanding piecewise-constant
//! control sequence for A1 within a road corridor.

use alloc::vec::Vec;

#[allow(unused_imports)] // float methods come from std when it is linked
use num_traits::Float;
use rand::Rng;

use crate::error::{Error, Result};
use crate::geometry::{longitudinal_lateral_decompose, signed_separation, OrientedRect, Shape, Vec2};
use crate::models::Trajectory;
use crate::scene::MetricContext;
use crate::types::{ActorId, ActorState, Flag, Flagged, Scene};

/// Weights and parameters of the TCI optimization.
#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(default))]
pub struct TciParams {
    pub horizon: f64,
    /// Number of piecewise-constant control intervals.
    pub steps: usize,
    pub w_long: f64,
    pub w_y: f64,
    pub w_ax: f64,
    pub w_ay: f64,
    /// Friction coefficient; the actor's capability when `None`.
    pub mu_max: Option<f64>,
    pub g: f64,
    /// Maximum speed; the actor's capability when `None`.
    pub v_max: Option<f64>,
    /// Time headway defining the following-distance reference.
    pub headway: f64,
    /// Lateral corridor bounds `(right, left)` relative to A1, in its frame.
    pub corridor: (f64, f64),
    /// Collision checks per control interval.
    pub substeps: usize,
    pub restarts: usize,
    pub seed: u64,
}

impl Default for TciParams {
    fn default() -> Self {
        TciParams {
            horizon: 3.0,
            steps: 3,
            w_long: 1.0,
            w_y: 1.0,
            w_ax: 1.0,
            w_ay: 1.0,
            mu_max: None,
            g: 9.81,
            v_max: None,
            headway: 2.0,
            corridor: (-1.75, 1.75),
            substeps: 10,
            restarts: 32,
            seed: 0,
        }
    }
}

impl TciParams {
    pub fn validate(&self) -> Result<()> {
        let weights = [self.w_long, self.w_y, self.w_ax, self.w_ay];
        if weights.iter().any(|w| !(*w >= 0.0) || !w.is_finite()) {
            return Err(Error::InvalidParameter("TCI weights must be non-negative".into()));
        }
        if !(self.horizon > 0.0) || self.steps == 0 || self.substeps == 0 || !(self.g > 0.0) {
            return Err(Error::InvalidParameter("TCI horizon, steps and g".into()));
        }
        if !(self.corridor.0 < self.corridor.1) || !(self.headway >= 0.0) {
            return Err(Error::InvalidParameter("TCI corridor".into()));
        }
        Ok(())
    }
}

#[derive(Clone, Debug)]
enum Obstacle {
    Moving { trajectory: Trajectory, length: f64, width: f64 },
    Static(Vec<Vec2>),
}

/// The discretized TCI problem for one actor, in A1's road frame.
#[derive(Clone, Debug)]
pub struct TciProblem {
    params: TciParams,
    origin: Vec2,
    yaw: f64,
    v_long: f64,
    v_lat: f64,
    length: f64,
    width: f64,
    a_max: f64,
    v_max: f64,
    r_lat: f64,
    obstacles: Vec<Obstacle>,
}

#[derive(Clone, Copy, Debug)]
struct Sample {
    t: f64,
    x: f64,
    y: f64,
    vx: f64,
    vy: f64,
}

impl TciProblem {
    pub fn new(ctx: &MetricContext, scene: &Scene, a1: ActorId, params: &TciParams) -> Result<Self> {
        params.validate()?;
        let ego = scene.actor(a1)?;
        let mu = params.mu_max.unwrap_or(ego.capabilities.mu_max);
        let v_max = params.v_max.unwrap_or(ego.capabilities.v_max);
        if !(mu > 0.0) || !(v_max > 0.0) {
            return Err(Error::InvalidCapability);
        }
        let horizon_ctx = ctx.with_predictor(crate::models::Predictor { horizon: params.horizon, ..ctx.predictor.clone() });
        let mut obstacles = Vec::new();
        for other in scene.others(a1) {
            obstacles.push(Obstacle::Moving {
                trajectory: horizon_ctx.predict(other)?,
                length: other.length,
                width: other.width,
            });
        }
        obstacles.extend(scene.static_objects.iter().cloned().map(Obstacle::Static));
        let mut p = TciProblem {
            params: params.clone(),
            origin: ego.position,
            yaw: ego.yaw,
            v_long: ego.v_long(),
            v_lat: ego.v_lat(),
            length: ego.length,
            width: ego.width,
            a_max: mu * params.g,
            v_max,
            r_lat: 0.0,
            obstacles,
        };
        p.r_lat = p.lateral_reference(ego);
        Ok(p)
    }

    /// Lateral position of A1's center with the largest clearance to all
    /// obstacles within the corridor (corridor center without obstacles).
    fn lateral_reference(&self, ego: &ActorState) -> f64 {
        let (lo, hi) = (self.params.corridor.0 + 0.5 * ego.width, self.params.corridor.1 - 0.5 * ego.width);
        let center = 0.5 * (self.params.corridor.0 + self.params.corridor.1);
        if lo > hi {
            return center;
        }
        let bands: Vec<(f64, f64)> = self
            .obstacles
            .iter()
            .filter_map(|o| {
                let poly = self.obstacle_polygon(o, 0.0);
                let ys = poly.iter().map(|p| self.to_road(*p).1);
                let (mn, mx) = ys.fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), y| (a.min(y), b.max(y)));
                (mx > self.params.corridor.0 && mn < self.params.corridor.1).then_some((mn, mx))
            })
            .collect();
        if bands.is_empty() {
            return center.clamp(lo, hi);
        }
        let clearance = |y: f64| {
            bands
                .iter()
                .map(|&(mn, mx)| {
                    let (e0, e1) = (y - 0.5 * ego.width, y + 0.5 * ego.width);
                    if e1 <= mn {
                        mn - e1
                    } else if e0 >= mx {
                        e0 - mx
                    } else {
                        0.0
                    }
                })
                .fold(f64::INFINITY, f64::min)
        };
        const N: usize = 200;
        let mut best = (f64::NEG_INFINITY, lo);
        for k in 0..=N {
            let y = lo + (hi - lo) * k as f64 / N as f64;
            let c = clearance(y);
            if c > best.0 + 1e-12 || (c >= best.0 - 1e-12 && y.abs() < best.1.abs()) {
                best = (c, y);
            }
        }
        best.1
    }

    fn to_road(&self, p: Vec2) -> (f64, f64) {
        longitudinal_lateral_decompose(p - self.origin, self.yaw)
    }

    fn obstacle_polygon(&self, o: &Obstacle, t: f64) -> Vec<Vec2> {
        match o {
            Obstacle::Moving { trajectory, length, width } => {
                let p = trajectory.at(t);
                OrientedRect::new(p.position, p.heading, *length, *width).polygon()
            }
            Obstacle::Static(poly) => poly.clone(),
        }
    }

    pub fn steps(&self) -> usize {
        self.params.steps
    }

    /// Radius of Kamm's circle, `μ_max g`.
    pub fn kamm_radius(&self) -> f64 {
        self.a_max
    }

    /// Scales a control pair back onto Kamm's circle if outside.
    pub fn project(&self, (ax, ay): (f64, f64)) -> (f64, f64) {
        let n = ax.hypot(ay);
        if n > self.a_max {
            let s = self.a_max / n;
            (ax * s, ay * s)
        } else {
            (ax, ay)
        }
    }

    fn state_at(&self, s: Sample, ax: f64, ay: f64, tau: f64) -> Sample {
        // longitudinal speed stays non-negative
        let (dx, vx) = if ax < 0.0 && s.vx + ax * tau < 0.0 {
            let ts = s.vx / -ax;
            (s.vx * ts + 0.5 * ax * ts * ts, 0.0)
        } else {
            (s.vx * tau + 0.5 * ax * tau * tau, s.vx + ax * tau)
        };
        Sample { t: s.t + tau, x: s.x + dx, y: s.y + s.vy * tau + 0.5 * ay * tau * tau, vx, vy: s.vy + ay * tau }
    }

    fn violates(&self, s: &Sample) -> bool {
        let half = 0.5 * self.width;
        if s.y - half < self.params.corridor.0 - 1e-9 || s.y + half > self.params.corridor.1 + 1e-9 {
            return true;
        }
        // the body keeps the road heading
        let center = self.origin + crate::geometry::compose(s.x, s.y, self.yaw);
        let ego = Shape::Polygon(OrientedRect::new(center, self.yaw, self.length, self.width).polygon());
        self.obstacles
            .iter()
            .any(|o| signed_separation(&ego, &Shape::Polygon(self.obstacle_polygon(o, s.t))) < -1e-9)
    }

    /// Longitudinal margin term: intrusion of A1's front into the headway
    /// gap behind the nearest obstacle ahead in its lateral band.
    fn r_long(&self, s: &Sample) -> f64 {
        let front = s.x + 0.5 * self.length;
        let (e0, e1) = (s.y - 0.5 * self.width, s.y + 0.5 * self.width);
        let mut lead = f64::INFINITY;
        for o in &self.obstacles {
            let pts: Vec<(f64, f64)> = self.obstacle_polygon(o, s.t).into_iter().map(|p| self.to_road(p)).collect();
            let (ymin, ymax) = pts.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), p| (a.min(p.1), b.max(p.1)));
            let xmin = pts.iter().map(|p| p.0).fold(f64::INFINITY, f64::min);
            if ymax > e0 && ymin < e1 && xmin >= s.x {
                lead = lead.min(xmin);
            }
        }
        if lead.is_infinite() {
            return 0.0;
        }
        let v = s.vx.max(0.0);
        let r = lead - self.params.headway * v;
        let d = (self.params.headway * v).max(1.0);
        (front - r).max(0.0) / d
    }

    /// Objective of a control sequence `[(a_long, a_lat); steps]`, `+inf` if
    /// it hits an obstacle or leaves the corridor.
    pub fn objective(&self, controls: &[(f64, f64)]) -> f64 {
        let p = &self.params;
        if controls.len() != p.steps {
            return f64::INFINITY;
        }
        let dt = p.horizon / p.steps as f64;
        let sub = dt / p.substeps as f64;
        let d_lat = 0.5 * (p.corridor.1 - p.corridor.0);
        let mut s = Sample { t: 0.0, x: 0.0, y: 0.0, vx: self.v_long, vy: self.v_lat };
        if self.violates(&s) {
            return f64::INFINITY;
        }
        let mut total = 0.0;
        for &(ax, ay) in controls {
            if ax.hypot(ay) > self.a_max * (1.0 + 1e-12) {
                return f64::INFINITY;
            }
            let start = s;
            for k in 1..=p.substeps {
                let n = self.state_at(start, ax, ay, sub * k as f64);
                if self.violates(&n) {
                    return f64::INFINITY;
                }
            }
            s = self.state_at(start, ax, ay, dt);
            let speed_prev = start.vx.hypot(start.vy);
            let r_lat2 = (s.y - self.r_lat).powi(2) * speed_prev / (d_lat * d_lat * self.v_max);
            total += p.w_long * self.r_long(&s)
                + p.w_y * r_lat2
                + (p.w_ax * ax * ax + p.w_ay * ay * ay) / (self.a_max * self.a_max);
        }
        total
    }

    /// Whether A1 already starts in contact or outside the corridor.
    pub fn infeasible_start(&self) -> bool {
        self.violates(&Sample { t: 0.0, x: 0.0, y: 0.0, vx: self.v_long, vy: self.v_lat })
    }
}

/// Projected coordinate descent from `start`; returns the local optimum.
fn descend(problem: &TciProblem, start: Vec<(f64, f64)>) -> (f64, Vec<(f64, f64)>) {
    let mut u = start;
    let mut best = problem.objective(&u);
    let mut step = 0.5 * problem.kamm_radius();
    while step > 1e-6 {
        let mut improved = false;
        for i in 0..u.len() {
            for axis in 0..2 {
                for sign in [1.0, -1.0] {
                    let mut cand = u.clone();
                    let c = &mut cand[i];
                    if axis == 0 {
                        c.0 += sign * step;
                    } else {
                        c.1 += sign * step;
                    }
                    *c = problem.project(*c);
                    let v = problem.objective(&cand);
                    if v < best {
                        best = v;
                        u = cand;
                        improved = true;
                    }
                }
            }
        }
        if !improved {
            step *= 0.5;
        }
    }
    (best, u)
}

/// Minimum TCI objective found by coordinate descent from zero controls and
/// from seeded random restarts inside Kamm's circle.
pub fn tci(ctx: &MetricContext, scene: &Scene, a1: ActorId, params: &TciParams) -> Result<Flagged<f64>> {
    let problem = TciProblem::new(ctx, scene, a1, params)?;
    if problem.infeasible_start() {
        return Ok(Flagged::flagged(f64::INFINITY, Flag::InfeasibleStart));
    }
    let n = problem.steps();
    let (mut best, _) = descend(&problem, alloc::vec![(0.0, 0.0); n]);
    let r = problem.kamm_radius();
    for k in 0..params.restarts {
        let mut rng = crate::rng::stream(params.seed, k as u64);
        // find a feasible random start (a few tries)
        for _ in 0..16 {
            let start: Vec<(f64, f64)> = (0..n)
                .map(|_| {
                    let rho = r * crate::rng::unit(&mut rng).sqrt();
                    let phi = rng.random::<f64>() * core::f64::consts::TAU;
                    (rho * phi.cos(), rho * phi.sin())
                })
                .collect();
            if problem.objective(&start).is_finite() {
                let (v, _) = descend(&problem, start);
                best = best.min(v);
                break;
            }
        }
    }
    Ok(Flagged::plain(best))
}
