//! Contact and closest-encounter queries between moving bodies.
//!
//! Bodies are points (center mode) or oriented rectangles (footprint mode)
//! following a [`Trajectory`], or static polygons. Point pairs are solved
//! analytically on each linear trajectory segment; other pairs use
//! conservative advancement on the signed separation followed by bisection.

#[allow(unused_imports)] // float methods come from std when it is linked
use num_traits::Float;
use alloc::vec::Vec;

use crate::geometry::{signed_separation, wrap_angle, OrientedRect, Shape, Vec2};
use crate::models::Trajectory;
use crate::types::ActorState;

/// How actors are represented in distance and contact computations.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum DistanceMode {
    /// Actors are their center points.
    Center,
    /// Actors are oriented rectangles of their length and width.
    #[default]
    Footprint,
}

#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(default))]
pub struct ContactConfig {
    pub mode: DistanceMode,
    /// Two points are in contact when closer than this.
    pub point_tolerance: f64,
    /// Shapes are in contact when they overlap deeper than this.
    pub overlap_tolerance: f64,
    /// Resolution of contact times.
    pub time_tolerance: f64,
    /// Smallest advancement step while bodies are nearly touching.
    pub min_step: f64,
}

impl Default for ContactConfig {
    fn default() -> Self {
        ContactConfig {
            mode: DistanceMode::Footprint,
            point_tolerance: 1e-6,
            overlap_tolerance: 1e-9,
            time_tolerance: 1e-7,
            min_step: 1e-4,
        }
    }
}

impl ContactConfig {
    pub fn center() -> Self {
        ContactConfig { mode: DistanceMode::Center, ..Default::default() }
    }

    pub fn footprint() -> Self {
        ContactConfig::default()
    }
}

/// A body whose shape can be queried over time offsets.
#[derive(Clone, Copy, Debug)]
pub enum Body<'a> {
    /// `extent` is `(length, width)`; `None` for a point.
    Moving { trajectory: &'a Trajectory, extent: Option<(f64, f64)> },
    Static(&'a [Vec2]),
}

impl<'a> Body<'a> {
    pub fn actor(trajectory: &'a Trajectory, state: &ActorState, mode: DistanceMode) -> Self {
        let extent = match mode {
            DistanceMode::Center => None,
            DistanceMode::Footprint => Some((state.length, state.width)),
        };
        Body::Moving { trajectory, extent }
    }

    pub fn point(trajectory: &'a Trajectory) -> Self {
        Body::Moving { trajectory, extent: None }
    }

    pub fn shape_at(&self, t: f64) -> Shape {
        match *self {
            Body::Moving { trajectory, extent } => {
                let p = trajectory.at(t);
                match extent {
                    None => Shape::Point(p.position),
                    Some((l, w)) => Shape::Polygon(OrientedRect::new(p.position, p.heading, l, w).polygon()),
                }
            }
            Body::Static(poly) => Shape::Polygon(poly.to_vec()),
        }
    }

    fn is_point(&self) -> bool {
        matches!(self, Body::Moving { extent: None, .. })
    }

    fn radius(&self) -> f64 {
        match *self {
            Body::Moving { extent: Some((l, w)), .. } => 0.5 * l.hypot(w),
            _ => 0.0,
        }
    }

    fn push_breakpoints(&self, from: f64, to: f64, out: &mut Vec<f64>) {
        if let Body::Moving { trajectory, .. } = self {
            out.extend(trajectory.breakpoints(from, to));
        }
    }

    /// Upper bound on how fast any point of the body moves within each
    /// window of the sorted offsets `ts`. Windows must not straddle a sample.
    fn window_speeds(&self, ts: &[f64], out: &mut [f64]) {
        let Body::Moving { trajectory, .. } = *self else { return };
        let (pts, r) = (trajectory.points(), self.radius());
        let mut i = 0;
        for (k, w) in ts.windows(2).enumerate() {
            while i + 1 < pts.len() && pts[i + 1].t <= w[0] {
                i += 1;
            }
            if i + 1 >= pts.len() || w[1] <= pts[0].t {
                continue;
            }
            let (p, q) = (pts[i], pts[i + 1]);
            let dt = q.t - p.t;
            out[k] += (q.position - p.position).norm() / dt + wrap_angle(q.heading - p.heading).abs() / dt * r;
        }
    }
}

fn window_speeds(a: &Body, b: &Body, ts: &[f64]) -> Vec<f64> {
    let mut v = alloc::vec![0.0; ts.len().saturating_sub(1)];
    a.window_speeds(ts, &mut v);
    b.window_speeds(ts, &mut v);
    v
}

pub fn separation(a: &Body, b: &Body, t: f64) -> f64 {
    signed_separation(&a.shape_at(t), &b.shape_at(t))
}

fn threshold(a: &Body, b: &Body, cfg: &ContactConfig) -> f64 {
    if a.is_point() && b.is_point() {
        cfg.point_tolerance
    } else {
        -cfg.overlap_tolerance
    }
}

pub fn in_contact(a: &Body, b: &Body, t: f64, cfg: &ContactConfig) -> bool {
    separation(a, b, t) < threshold(a, b, cfg)
}

fn intervals(a: &Body, b: &Body, from: f64, to: f64) -> Vec<f64> {
    let mut ts = alloc::vec![from];
    a.push_breakpoints(from, to, &mut ts);
    b.push_breakpoints(from, to, &mut ts);
    ts.push(to);
    ts.sort_by(f64::total_cmp);
    ts.dedup();
    ts
}

fn positions(a: &Body, b: &Body, t: f64) -> Vec2 {
    let p = |x: &Body| match *x {
        Body::Moving { trajectory, .. } => trajectory.at(t).position,
        Body::Static(_) => Vec2::ZERO,
    };
    p(a) - p(b)
}

/// Earliest offset in `[from, to]` at which the bodies are in contact.
pub fn first_contact(a: &Body, b: &Body, from: f64, to: f64, cfg: &ContactConfig) -> Option<f64> {
    if !(to >= from) {
        return None;
    }
    let thr = threshold(a, b, cfg);
    let ts = intervals(a, b, from, to);
    if a.is_point() && b.is_point() {
        if positions(a, b, from).norm() < thr {
            return Some(from);
        }
        for w in ts.windows(2) {
            let (t0, t1) = (w[0], w[1]);
            let r0 = positions(a, b, t0);
            let d = positions(a, b, t1) - r0;
            let qa = d.norm_squared();
            let qb = 2.0 * r0.dot(d);
            let qc = r0.norm_squared() - thr * thr;
            if qc < 0.0 {
                return Some(t0);
            }
            if qa == 0.0 {
                continue;
            }
            let disc = qb * qb - 4.0 * qa * qc;
            if disc < 0.0 {
                continue;
            }
            let s = (-qb - disc.sqrt()) / (2.0 * qa);
            if (0.0..=1.0).contains(&s) {
                return Some(t0 + s * (t1 - t0));
            }
        }
        return None;
    }

    // conservative advancement: no contact can happen before the summed
    // speed bounds have used up the current separation
    let speeds = window_speeds(a, b, &ts);
    let (mut t, mut prev, mut k) = (from, from, 0);
    loop {
        let s = separation(a, b, t);
        if s < thr {
            let (_, hit) = crate::search::bisect(prev, t, cfg.time_tolerance, |x| separation(a, b, x) >= thr);
            return Some(hit);
        }
        if t >= to {
            return None;
        }
        prev = t;
        let mut budget = s - thr;
        let mut next = t;
        while k < speeds.len() {
            let (v, t1) = (speeds[k], ts[k + 1]);
            if v * (t1 - next) <= budget {
                budget -= v * (t1 - next);
                next = t1;
                k += 1;
            } else {
                next += budget / v;
                break;
            }
        }
        t = next.max(t + cfg.min_step).min(to);
        while k < speeds.len() && ts[k + 1] <= t {
            k += 1;
        }
    }
}

/// Minimum separation over `[from, to]` and its earliest argmin.
///
/// Contact yields distance 0 at the first contact time.
pub fn closest_encounter(a: &Body, b: &Body, from: f64, to: f64, cfg: &ContactConfig) -> (f64, f64) {
    if let Some(t) = first_contact(a, b, from, to, cfg) {
        return (0.0, t);
    }
    const TIE: f64 = 1e-9;
    let ts = intervals(a, b, from, to);
    let mut best = (separation(a, b, from).max(0.0), from);
    let consider = |d: f64, t: f64, best: &mut (f64, f64)| {
        if d < best.0 - TIE {
            *best = (d, t);
        }
    };
    if a.is_point() && b.is_point() {
        for w in ts.windows(2) {
            let (t0, t1) = (w[0], w[1]);
            let r0 = positions(a, b, t0);
            let d = positions(a, b, t1) - r0;
            let qa = d.norm_squared();
            let s = if qa > 0.0 { (-r0.dot(d) / qa).clamp(0.0, 1.0) } else { 0.0 };
            consider((r0 + d * s).norm(), t0 + s * (t1 - t0), &mut best);
        }
        return best;
    }
    // Lipschitz bounds pick the stretches that can hold the minimum: first
    // over blocks of windows, then over the windows of a promising block,
    // which are sampled densely, closest first, and refined
    const BLOCK: usize = 32;
    const PIECE: f64 = 0.05;
    let mut pieces = Vec::with_capacity(ts.len());
    for w in ts.windows(2) {
        let n = ((w[1] - w[0]) / PIECE).ceil().max(1.0) as usize;
        pieces.extend((0..n).map(|k| w[0] + (w[1] - w[0]) * k as f64 / n as f64));
    }
    pieces.push(to);
    let ts = pieces;
    let mut ends: Vec<Option<f64>> = alloc::vec![None; ts.len()];
    let end = |k: usize, ends: &mut Vec<Option<f64>>| *ends[k].get_or_insert_with(|| separation(a, b, ts[k]).max(0.0));
    // chord speeds of single windows; a block takes the largest of its windows
    let speeds = window_speeds(a, b, &ts);
    let bound = |i: usize, j: usize, ei: f64, ej: f64| {
        let v = speeds[i..j].iter().copied().fold(0.0, f64::max);
        (0.5 * (ei + ej - v * (ts[j] - ts[i])), v)
    };
    let last = ts.len() - 1;
    let mut blocks: Vec<(f64, usize, usize)> = (0..last)
        .step_by(BLOCK)
        .map(|i| {
            let j = (i + BLOCK).min(last);
            let (ei, ej) = (end(i, &mut ends), end(j, &mut ends));
            (bound(i, j, ei, ej).0, i, j)
        })
        .collect();
    let mut upper = ends.iter().flatten().copied().fold(best.0, f64::min);
    blocks.sort_by(|x, y| x.0.total_cmp(&y.0).then(x.1.cmp(&y.1)));
    let mut windows = Vec::new();
    for (block_bound, i, j) in blocks {
        if block_bound > upper + TIE {
            break;
        }
        let mut candidates: Vec<(f64, usize, f64)> = (i..j)
            .map(|k| {
                let (e0, e1) = (end(k, &mut ends), end(k + 1, &mut ends));
                let (lb, v) = bound(k, k + 1, e0, e1);
                (lb, k, v)
            })
            .collect();
        upper = (i..=j).filter_map(|k| ends[k]).fold(upper, f64::min);
        candidates.sort_by(|x, y| x.0.total_cmp(&y.0).then(x.1.cmp(&y.1)));
        for (lb, k, v) in candidates {
            if lb > upper + TIE {
                break;
            }
            let (t0, t1) = (ts[k], ts[k + 1]);
            let n = ((t1 - t0) * v / 0.02).ceil().clamp(1.0, 2000.0) as usize;
            let h = (t1 - t0) / n as f64;
            let mut local = (end(k, &mut ends), t0);
            for s in 1..=n {
                let (t, d) = if s == n { (t1, end(k + 1, &mut ends)) } else {
                    let t = t0 + h * s as f64;
                    (t, separation(a, b, t).max(0.0))
                };
                if d < local.0 - TIE {
                    local = (d, t);
                }
            }
            upper = upper.min(local.0);
            windows.push((t0, t1, h, local, local.0 - 0.5 * v * h));
        }
    }
    windows.sort_by(|x, y| x.0.total_cmp(&y.0));
    for (t0, t1, h, mut local, lower) in windows {
        if lower > upper + TIE {
            continue;
        }
        let (d, t) = golden_refine(|x| separation(a, b, x).max(0.0), (local.1 - h).max(t0), (local.1 + h).min(t1), cfg.time_tolerance);
        if d < local.0 - TIE {
            local = (d, t);
        }
        // earliest time attaining the minimum (plateaus are common for boxes)
        let lower = (local.1 - h).max(t0);
        if lower < local.1 && separation(a, b, lower).max(0.0) > local.0 + TIE {
            let (earliest, _) = crate::search::bisect(local.1, lower, cfg.time_tolerance, |x| {
                separation(a, b, x).max(0.0) <= local.0 + TIE
            });
            local.1 = earliest;
        }
        consider(local.0, local.1, &mut best);
    }
    best
}

fn golden_refine(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64, tol: f64) -> (f64, f64) {
    let g = 0.5 * (5f64.sqrt() - 1.0);
    let mut x1 = hi - g * (hi - lo);
    let mut x2 = lo + g * (hi - lo);
    let (mut f1, mut f2) = (f(x1), f(x2));
    while hi - lo > tol {
        if f1 <= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - g * (hi - lo);
            f1 = f(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + g * (hi - lo);
            f2 = f(x2);
        }
    }
    let t = 0.5 * (lo + hi);
    (f(t), t)
}
