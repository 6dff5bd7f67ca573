//! Random axis-aligned CV/CA fixtures and brute-force oracles sampled every millisecond.
#![allow(dead_code)]

use criticality::models::MotionModel;
use criticality::rng::{stream, unit};
use criticality::scene::MetricContext;
use criticality::types::{ActorId, ActorState, Scene};
use criticality::{ContactConfig, Predictor, Vec2};

pub const HORIZON: f64 = 10.0;
pub const DT: f64 = 1e-3;
/// Prediction sampling step; CA paths are linear between samples.
pub const STEP: f64 = 1e-3;

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Layout {
    /// Both actors drive along +x.
    Following,
    /// A1 along +x, A2 along +y.
    Crossing,
}

/// One actor moving along a coordinate axis.
#[derive(Clone, Copy, Debug)]
pub struct Mover {
    pub start: Vec2,
    /// Travel along +y instead of +x.
    pub vertical: bool,
    pub v: f64,
    pub a: f64,
    pub length: f64,
    pub width: f64,
}

impl Mover {
    fn dir(&self) -> Vec2 {
        if self.vertical {
            Vec2::new(0.0, 1.0)
        } else {
            Vec2::new(1.0, 0.0)
        }
    }

    /// Distance travelled after `t`, frozen once stopped.
    pub fn travel(&self, t: f64, accelerate: bool) -> f64 {
        let a = if accelerate { self.a } else { 0.0 };
        let t = if a < 0.0 { t.min(-self.v / a) } else { t };
        self.v * t + 0.5 * a * t * t
    }

    pub fn center(&self, t: f64, accelerate: bool) -> Vec2 {
        self.start + self.dir() * self.travel(t, accelerate)
    }

    /// Half extents along x and y.
    pub fn half(&self) -> (f64, f64) {
        if self.vertical {
            (self.width / 2.0, self.length / 2.0)
        } else {
            (self.length / 2.0, self.width / 2.0)
        }
    }

    pub fn state(&self, id: u64) -> ActorState {
        let d = self.dir();
        ActorState::new(id, 0.0, self.start, d * self.v)
            .with_acceleration(d * self.a)
            .with_yaw(d.angle())
            .with_size(self.length, self.width)
    }
}

#[derive(Clone, Copy, Debug)]
pub struct Fixture {
    pub layout: Layout,
    pub constant_acceleration: bool,
    pub a1: Mover,
    pub a2: Mover,
}

fn between(r: &mut impl criticality::rng::Rng, lo: f64, hi: f64) -> f64 {
    lo + (hi - lo) * unit(r)
}

impl Fixture {
    /// Fixture `index` of the stream keyed by `seed`; layouts and models alternate.
    pub fn random(seed: u64, index: u64) -> Fixture {
        let r = &mut stream(seed, index);
        let layout = if index.is_multiple_of(2) { Layout::Following } else { Layout::Crossing };
        let constant_acceleration = index % 4 >= 2;
        let size = |r: &mut _| (between(r, 3.5, 5.0), between(r, 1.6, 2.2));
        let (l1, w1) = size(r);
        let (l2, w2) = size(r);
        let v1 = between(r, 5.0, 30.0);
        let a1 = between(r, -4.0, 2.0);
        match layout {
            Layout::Following => {
                let gap = between(r, 5.0, 80.0);
                // mostly in lane, sometimes on the neighbouring lane
                let dy = if unit(r) < 0.8 { between(r, -1.2, 1.2) } else { between(r, 2.5, 3.5) };
                let a2 = if unit(r) < 0.7 { between(r, -6.0, -0.5) } else { between(r, 0.5, 1.5) };
                Fixture {
                    layout,
                    constant_acceleration,
                    a1: Mover { start: Vec2::ZERO, vertical: false, v: v1, a: a1, length: l1, width: w1 },
                    a2: Mover {
                        start: Vec2::new(gap + (l1 + l2) / 2.0, dy),
                        vertical: false,
                        v: between(r, 0.5, 25.0),
                        a: a2,
                        length: l2,
                        width: w2,
                    },
                }
            }
            Layout::Crossing => Fixture {
                layout,
                constant_acceleration,
                a1: Mover {
                    start: Vec2::new(-between(r, 20.0, 120.0), 0.0),
                    vertical: false,
                    v: v1,
                    a: a1,
                    length: l1,
                    width: w1,
                },
                a2: Mover {
                    start: Vec2::new(between(r, -3.0, 3.0), -between(r, 15.0, 100.0)),
                    vertical: true,
                    v: between(r, 5.0, 25.0),
                    a: between(r, -4.0, 2.0),
                    length: l2,
                    width: w2,
                },
            },
        }
    }

    pub fn scene(&self) -> Scene {
        Scene::new(0.0, vec![self.a1.state(1), self.a2.state(2)]).unwrap()
    }

    pub fn ctx(&self) -> MetricContext {
        let model = if self.constant_acceleration { MotionModel::ConstantAcceleration } else { MotionModel::ConstantVelocity };
        MetricContext::new(Predictor::new(model, HORIZON, STEP).unwrap(), ContactConfig::footprint())
    }

    fn centers(&self, t: f64) -> (Vec2, Vec2) {
        (self.a1.center(t, self.constant_acceleration), self.a2.center(t, self.constant_acceleration))
    }
}

pub const A1: ActorId = ActorId(1);
pub const A2: ActorId = ActorId(2);

fn grid() -> impl Iterator<Item = f64> {
    let n = (HORIZON / DT).round() as usize;
    (0..=n).map(|k| k as f64 * DT)
}

/// Gap between two axis-aligned boxes, negative components when overlapping.
fn box_gaps(c1: Vec2, h1: (f64, f64), c2: Vec2, h2: (f64, f64)) -> (f64, f64) {
    ((c1.x - c2.x).abs() - h1.0 - h2.0, (c1.y - c2.y).abs() - h1.1 - h2.1)
}

fn overlapping(g: (f64, f64)) -> bool {
    g.0 < 0.0 && g.1 < 0.0
}

fn box_distance(g: (f64, f64)) -> f64 {
    g.0.max(0.0).hypot(g.1.max(0.0))
}

/// First time a predicate holds on the grid, placed midway between the last
/// miss and the first hit.
fn first_hit(mut hit: impl FnMut(f64) -> bool) -> f64 {
    let mut prev = None;
    for t in grid() {
        if hit(t) {
            return prev.map_or(t, |p: f64| 0.5 * (p + t));
        }
        prev = Some(t);
    }
    f64::INFINITY
}

pub fn ttc(f: &Fixture) -> f64 {
    first_hit(|t| {
        let (c1, c2) = f.centers(t);
        overlapping(box_gaps(c1, f.a1.half(), c2, f.a2.half()))
    })
}

pub fn thw(f: &Fixture) -> f64 {
    first_hit(|t| {
        let c1 = f.a1.center(t, f.constant_acceleration);
        overlapping(box_gaps(c1, f.a1.half(), f.a2.start, f.a2.half()))
    })
}

/// Car following with A1 at constant speed and the lead braking to a stop.
pub fn pttc(f: &Fixture) -> f64 {
    first_hit(|t| {
        let x1 = f.a1.start.x + f.a1.v * t;
        let x2 = f.a2.start.x + f.a2.travel(t, true);
        x2 - x1 - 0.5 * (f.a1.length + f.a2.length) <= 0.0
    })
}

/// Minimum footprint distance and its earliest time on the grid.
pub fn dce_ttce(f: &Fixture) -> (f64, f64) {
    let contact = ttc(f);
    if contact.is_finite() {
        return (0.0, contact);
    }
    let mut best = (f64::INFINITY, 0.0);
    for t in grid() {
        let (c1, c2) = f.centers(t);
        let d = box_distance(box_gaps(c1, f.a1.half(), c2, f.a2.half()));
        if d < best.0 - 1e-9 {
            best = (d, t);
        }
    }
    best
}

/// Occupancy interval of a mover in a band `[lo, hi]` of its travel axis.
fn band_interval(m: &Mover, accelerate: bool, lo: f64, hi: f64) -> Option<(f64, f64)> {
    let (mut first, mut last, mut prev_out) = (None, None, None);
    let mut after_in = None;
    let h = m.length / 2.0;
    for t in grid() {
        let c = m.center(t, accelerate);
        let x = if m.vertical { c.y } else { c.x };
        let inside = x + h > lo && x - h < hi;
        if inside {
            if first.is_none() {
                first = Some(prev_out.map_or(t, |p: f64| 0.5 * (p + t)));
            }
            last = Some(t);
        } else if first.is_some() && after_in.is_none() {
            after_in = Some(t);
        } else {
            prev_out = Some(t);
        }
    }
    let first = first?;
    let last = last?;
    let end = after_in.map_or(last, |o| 0.5 * (last + o));
    Some((first, end))
}

/// Predicted encroachment time of the crossing layout: both footprints must
/// occupy the intersection of the two lanes.
pub fn pret_crossing(f: &Fixture) -> f64 {
    assert_eq!(f.layout, Layout::Crossing);
    let (h1, h2) = (f.a1.half(), f.a2.half());
    let lane1 = (f.a1.start.y - h1.1, f.a1.start.y + h1.1);
    let lane2 = (f.a2.start.x - h2.0, f.a2.start.x + h2.0);
    let acc = f.constant_acceleration;
    let (Some(i1), Some(i2)) =
        (band_interval(&f.a1, acc, lane2.0, lane2.1), band_interval(&f.a2, acc, lane1.0, lane1.1))
    else {
        return f64::INFINITY;
    };
    (i2.0 - i1.1).max(i1.0 - i2.1).max(0.0)
}

/// `|a - b| <= tol`, treating equal infinities as agreeing.
pub fn agrees(a: f64, b: f64, tol: f64) -> bool {
    (a.is_infinite() && b.is_infinite() && a.signum() == b.signum()) || (a - b).abs() <= tol
}
