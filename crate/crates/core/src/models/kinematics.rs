//! Single point kinematics: truncated Taylor series and stop-aware constant acceleration.

use crate::error::{Error, Result};
use crate::geometry::{wrap_angle, Vec2};
use crate::types::ActorState;

/// Advances `state` by `dt` with the Taylor polynomial of order `order`.
///
/// Derivatives above jerk are not stored on a state; they (and a missing jerk)
/// are zero-filled only when `zero_fill` is set.
pub fn taylor_predict(state: &ActorState, order: u32, dt: f64, zero_fill: bool) -> Result<ActorState> {
    if order == 0 {
        return Err(Error::InvalidParameter("Taylor order must be at least 1".into()));
    }
    if !dt.is_finite() {
        return Err(Error::NonFinite);
    }
    let jerk = match state.jerk {
        Some(j) => j,
        None if order >= 3 && !zero_fill => return Err(Error::InsufficientDerivatives { order }),
        None => Vec2::ZERO,
    };
    if order >= 4 && !zero_fill {
        return Err(Error::InsufficientDerivatives { order });
    }
    if dt == 0.0 {
        return Ok(state.clone());
    }
    // derivatives[k] is the k-th time derivative of position
    let derivatives = [state.position, state.velocity, state.acceleration, jerk];
    let n = order as usize;
    let advance = |from: usize| {
        let mut acc = Vec2::ZERO;
        let mut factor = 1.0;
        for k in from..=n.min(3) {
            acc += derivatives[k] * factor;
            factor *= dt / (k + 1 - from) as f64;
        }
        acc
    };
    let mut out = state.clone();
    out.t = state.t + dt;
    out.position = advance(0);
    out.velocity = if n >= 1 { advance(1) } else { state.velocity };
    out.acceleration = if n >= 2 { advance(2) } else { Vec2::ZERO };
    out.yaw = follow_heading(state.yaw, state.velocity, out.velocity);
    Ok(out)
}

/// Rotates `yaw` by the change of travel direction between two velocities.
pub fn follow_heading(yaw: f64, v0: Vec2, v1: Vec2) -> f64 {
    if v0.norm() > 1e-9 && v1.norm() > 1e-9 {
        yaw + wrap_angle(v1.angle() - v0.angle())
    } else {
        yaw
    }
}

/// Time at which constant acceleration `a` brings velocity `v` to a halt
/// (its component along the initial direction of travel reaches zero).
pub fn stop_time(v: Vec2, a: Vec2) -> Option<f64> {
    let va = v.dot(a);
    if va < 0.0 {
        Some(-v.norm_squared() / va)
    } else {
        None
    }
}

/// Position and velocity after `t` under constant acceleration, frozen once stopped.
pub fn constant_acceleration(p: Vec2, v: Vec2, a: Vec2, t: f64) -> (Vec2, Vec2) {
    let t = match stop_time(v, a) {
        Some(ts) if t >= ts => return (p + v * ts + a * (0.5 * ts * ts), Vec2::ZERO),
        _ => t,
    };
    (p + v * t + a * (0.5 * t * t), v + a * t)
}

/// One-dimensional stop-aware motion: position and speed after `t`.
pub fn brake_1d(v: f64, a: f64, t: f64) -> (f64, f64) {
    if a < 0.0 && v >= 0.0 {
        let ts = -v / a;
        if t >= ts {
            return (v * ts + 0.5 * a * ts * ts, 0.0);
        }
    }
    (v * t + 0.5 * a * t * t, v + a * t)
}
