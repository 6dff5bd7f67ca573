//! Collision probability over weighted trajectory hypotheses.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::models::{Trajectory, TrajectorySet};
use crate::probabilistic::NORMALIZATION_TOL;
use crate::scene::MetricContext;
use crate::types::ActorState;

/// Hypotheses with realization probabilities summing to one.
#[derive(Clone, Debug, PartialEq)]
pub struct Hypotheses<T> {
    members: Vec<(T, f64)>,
}

impl<T> Hypotheses<T> {
    pub fn new(members: Vec<(T, f64)>) -> Result<Self> {
        if members.iter().any(|(_, p)| !(*p >= 0.0) || !p.is_finite()) {
            return Err(Error::InvalidParameter("hypothesis probabilities must be non-negative".into()));
        }
        let sum: f64 = members.iter().map(|m| m.1).sum();
        if (sum - 1.0).abs() > NORMALIZATION_TOL {
            return Err(Error::NotNormalized(sum));
        }
        Ok(Hypotheses { members })
    }

    /// Equally likely hypotheses.
    pub fn uniform(items: Vec<T>) -> Result<Self> {
        let p = 1.0 / items.len() as f64;
        Hypotheses::new(items.into_iter().map(|t| (t, p)).collect())
    }

    pub fn members(&self) -> &[(T, f64)] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }
}

impl Hypotheses<Trajectory> {
    /// Uses the set's weights, or equal probabilities when none are given.
    pub fn from_set(set: &TrajectorySet) -> Result<Self> {
        let members: Vec<(Trajectory, f64)> = set.members.iter().map(|(t, w)| (t.clone(), w.unwrap_or(1.0))).collect();
        let total: f64 = members.iter().map(|m| m.1).sum();
        if !(total > 0.0) {
            return Err(Error::NotNormalized(total));
        }
        Hypotheses::new(members.into_iter().map(|(t, w)| (t, w / total)).collect())
    }
}

/// `Σ_i Σ_j χ_ij p_i q_j`, where `χ_ij` is 1 if ego hypothesis `i` touches any
/// trajectory of joint hypothesis `j` of the other actors.
///
/// Each joint hypothesis holds one trajectory per entry of `others`.
pub fn p_smh(
    ctx: &MetricContext,
    ego: &ActorState,
    ego_hypotheses: &Hypotheses<Trajectory>,
    others: &[ActorState],
    other_hypotheses: &Hypotheses<Vec<Trajectory>>,
) -> Result<f64> {
    if other_hypotheses.members.iter().any(|(h, _)| h.len() != others.len()) {
        return Err(Error::InvalidParameter("joint hypothesis does not match the other actors".into()));
    }
    let mut p = 0.0;
    for (t1, p1) in &ego_hypotheses.members {
        for (joint, q) in &other_hypotheses.members {
            let hit = others.iter().zip(joint).any(|(s2, t2)| ctx.collides(ego, t1, s2, t2));
            if hit {
                p += p1 * q;
            }
        }
    }
    Ok(p.clamp(0.0, 1.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Vec2;
    use alloc::vec;

    fn line(y: f64, vx: f64) -> Trajectory {
        Trajectory::new(
            [0.0, 10.0]
                .iter()
                .map(|&t| crate::models::TrajectoryPoint {
                    t,
                    position: Vec2::new(vx * t, y),
                    heading: 0.0,
                    velocity: Vec2::new(vx, 0.0),
                })
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn single_colliding_pair_gives_quarter() {
        let ctx = MetricContext::default();
        let ego = ActorState::new(1, 0.0, Vec2::ZERO, Vec2::new(1.0, 0.0));
        let other = ActorState::new(2, 0.0, Vec2::new(0.0, 50.0), Vec2::ZERO);
        let e = Hypotheses::uniform(vec![line(0.0, 1.0), line(20.0, 1.0)]).unwrap();
        let o = Hypotheses::uniform(vec![vec![line(0.0, 1.0)], vec![line(-20.0, 1.0)]]).unwrap();
        assert_eq!(p_smh(&ctx, &ego, &e, core::slice::from_ref(&other), &o).unwrap(), 0.25);
        let all = Hypotheses::uniform(vec![vec![line(0.0, 1.0)], vec![line(0.5, 1.0)]]).unwrap();
        let same = Hypotheses::uniform(vec![line(0.0, 1.0), line(0.2, 1.0)]).unwrap();
        assert_eq!(p_smh(&ctx, &ego, &same, core::slice::from_ref(&other), &all).unwrap(), 1.0);
        let none = Hypotheses::uniform(vec![vec![line(30.0, 1.0)]]).unwrap();
        assert_eq!(p_smh(&ctx, &ego, &same, &[other], &none).unwrap(), 0.0);
    }

    #[test]
    fn unnormalized_is_rejected() {
        let r = Hypotheses::new(vec![(line(0.0, 1.0), 0.5), (line(1.0, 1.0), 0.4)]);
        assert!(matches!(r, Err(Error::NotNormalized(_))));
    }
}
