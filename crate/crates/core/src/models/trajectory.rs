use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::geometry::{wrap_angle, Vec2};

/// One predicted sample; `t` is the offset from the prediction start.
#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct TrajectoryPoint {
    pub t: f64,
    pub position: Vec2,
    pub heading: f64,
    pub velocity: Vec2,
}

/// Time-sampled motion, linearly interpolated between samples and held
/// constant beyond the last one.
#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Trajectory {
    points: Vec<TrajectoryPoint>,
}

impl Trajectory {
    pub fn new(points: Vec<TrajectoryPoint>) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::InvalidParameter("empty trajectory".into()));
        }
        for w in points.windows(2) {
            if !(w[1].t > w[0].t) {
                return Err(Error::InvalidParameter("trajectory times must increase".into()));
            }
        }
        if points.iter().any(|p| !p.position.is_finite() || !p.t.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(Trajectory { points })
    }

    /// A body resting at `position` for `duration` seconds.
    pub fn stationary(position: Vec2, heading: f64, duration: f64) -> Self {
        let p = |t| TrajectoryPoint { t, position, heading, velocity: Vec2::ZERO };
        let mut points = alloc::vec![p(0.0)];
        if duration > 0.0 {
            points.push(p(duration));
        }
        Trajectory { points }
    }

    pub fn points(&self) -> &[TrajectoryPoint] {
        &self.points
    }

    pub fn start(&self) -> &TrajectoryPoint {
        &self.points[0]
    }

    pub fn last(&self) -> &TrajectoryPoint {
        &self.points[self.points.len() - 1]
    }

    pub fn end_time(&self) -> f64 {
        self.last().t
    }

    /// Interpolated sample at offset `t`, clamped to the sampled range.
    pub fn at(&self, t: f64) -> TrajectoryPoint {
        let pts = &self.points;
        if t <= pts[0].t {
            return TrajectoryPoint { t, ..pts[0] };
        }
        let last = pts[pts.len() - 1];
        if t >= last.t {
            return TrajectoryPoint { t, ..last };
        }
        let i = pts.partition_point(|p| p.t <= t);
        let (a, b) = (pts[i - 1], pts[i]);
        let s = (t - a.t) / (b.t - a.t);
        TrajectoryPoint {
            t,
            position: a.position.lerp(b.position, s),
            heading: a.heading + wrap_angle(b.heading - a.heading) * s,
            velocity: a.velocity.lerp(b.velocity, s),
        }
    }

    /// Sample times within `[from, to]`, including both ends.
    pub fn breakpoints(&self, from: f64, to: f64) -> impl Iterator<Item = f64> + '_ {
        self.points.iter().map(|p| p.t).filter(move |t| *t > from && *t < to)
    }

    /// Trajectory restricted to offsets `>= from` and shifted so that it starts at 0.
    pub fn shifted_from(&self, from: f64) -> Trajectory {
        let mut pts: Vec<TrajectoryPoint> = alloc::vec![self.at(from)];
        pts.extend(self.points.iter().filter(|p| p.t > from).copied());
        for p in &mut pts {
            p.t -= from;
        }
        Trajectory { points: pts }
    }
}

/// A set of possible trajectories, optionally weighted.
#[derive(Clone, Debug, PartialEq, Default)]
pub struct TrajectorySet {
    pub members: Vec<(Trajectory, Option<f64>)>,
}

impl TrajectorySet {
    pub fn new(members: Vec<(Trajectory, Option<f64>)>) -> Result<Self> {
        let weighted = members.iter().filter(|m| m.1.is_some()).count();
        if weighted > 0 {
            if weighted != members.len() {
                return Err(Error::InvalidParameter("either all or no trajectories carry weights".into()));
            }
            let mut sum = 0.0;
            for (_, w) in &members {
                let w = w.unwrap_or(0.0);
                if !(w >= 0.0) {
                    return Err(Error::InvalidParameter("negative trajectory weight".into()));
                }
                sum += w;
            }
            if (sum - 1.0).abs() > 1e-9 {
                return Err(Error::NotNormalized(sum));
            }
        }
        Ok(TrajectorySet { members })
    }

    pub fn unweighted(trajectories: Vec<Trajectory>) -> Self {
        TrajectorySet { members: trajectories.into_iter().map(|t| (t, None)).collect() }
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &Trajectory> {
        self.members.iter().map(|m| &m.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn line() -> Trajectory {
        Trajectory::new(alloc::vec![
            TrajectoryPoint { t: 0.0, position: Vec2::ZERO, heading: 0.0, velocity: Vec2::new(1.0, 0.0) },
            TrajectoryPoint { t: 2.0, position: Vec2::new(2.0, 0.0), heading: 0.0, velocity: Vec2::new(1.0, 0.0) },
        ])
        .unwrap()
    }

    #[test]
    fn interpolates_and_clamps() {
        let tr = line();
        assert_eq!(tr.at(1.0).position, Vec2::new(1.0, 0.0));
        assert_eq!(tr.at(5.0).position, Vec2::new(2.0, 0.0));
        assert_eq!(tr.at(-1.0).position, Vec2::ZERO);
    }

    #[test]
    fn heading_takes_shortest_arc() {
        let p = |t, h| TrajectoryPoint { t, position: Vec2::ZERO, heading: h, velocity: Vec2::ZERO };
        let tr = Trajectory::new(alloc::vec![p(0.0, 3.0), p(1.0, -3.0)]).unwrap();
        let mid = tr.at(0.5).heading;
        assert!((wrap_angle(mid) - core::f64::consts::PI).abs() < 1e-9);
    }

    #[test]
    fn shift_restarts_at_zero() {
        let tr = line().shifted_from(0.5);
        assert_eq!(tr.start().t, 0.0);
        assert_eq!(tr.start().position, Vec2::new(0.5, 0.0));
        assert_eq!(tr.end_time(), 1.5);
    }

    #[test]
    fn set_weights_must_sum_to_one() {
        assert!(TrajectorySet::new(alloc::vec![(line(), Some(0.5)), (line(), Some(0.4))]).is_err());
        assert!(TrajectorySet::new(alloc::vec![(line(), Some(0.5)), (line(), Some(0.5))]).is_ok());
    }
}
