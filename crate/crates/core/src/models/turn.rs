//! Coordinated turn models in Cartesian and polar velocity form.

#[allow(unused_imports)] // float methods come from std when it is linked
use num_traits::Float;
use crate::geometry::Vec2;

/// Below this turn rate (rad/s) the straight-line limit is used.
pub const OMEGA_EPS: f64 = 1e-6;

/// Exact transition of a constant-speed, constant-turn-rate motion over `T`.
///
/// `omega` is counter-clockwise positive; the velocity vector is rotated by `omega * T`.
pub fn coordinated_turn_step(p: Vec2, v: Vec2, omega: f64, t: f64) -> (Vec2, Vec2) {
    if omega.abs() < OMEGA_EPS {
        return (p + v * t, v);
    }
    let (s, c) = (omega * t).sin_cos();
    let a = s / omega;
    let b = (1.0 - c) / omega;
    let p_next = Vec2::new(p.x + a * v.x - b * v.y, p.y + b * v.x + a * v.y);
    (p_next, v.rotate(omega * t))
}

/// State of the augmented coordinated turn model with polar velocity.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PolarTurnState {
    pub position: Vec2,
    pub v_long: f64,
    /// Direction of travel.
    pub phi: f64,
    pub omega: f64,
}

/// Closed-form solution for constant speed and zero rotational acceleration.
pub fn augmented_ct_polar_step(s: PolarTurnState, t: f64) -> PolarTurnState {
    let dir = if s.omega.abs() < OMEGA_EPS {
        Vec2::from_angle(s.phi) * (s.v_long * t)
    } else {
        let half = s.omega * t / 2.0;
        Vec2::from_angle(s.phi + half) * (2.0 * s.v_long / s.omega * half.sin())
    };
    PolarTurnState { position: s.position + dir, phi: s.phi + s.omega * t, ..s }
}
