//! Kinematic car models integrated with fixed-step RK4.

#[allow(unused_imports)] // float methods come from std when it is linked
use num_traits::Float;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::geometry::Vec2;
use crate::models::trajectory::{Trajectory, TrajectoryPoint};

/// Classical fixed-step RK4; the last step is shortened to land on `t_end`.
///
/// Returns the sampled solution including the initial value.
pub fn rk4<const N: usize>(
    mut f: impl FnMut(f64, &[f64; N]) -> Result<[f64; N]>,
    y0: [f64; N],
    t_end: f64,
    h: f64,
) -> Result<Vec<(f64, [f64; N])>> {
    if !(h > 0.0) || !t_end.is_finite() || t_end < 0.0 {
        return Err(Error::InvalidParameter("integration step and duration".into()));
    }
    let axpy = |y: &[f64; N], k: &[f64; N], s: f64| {
        let mut out = *y;
        for i in 0..N {
            out[i] += s * k[i];
        }
        out
    };
    let mut out = alloc::vec![(0.0, y0)];
    let mut t = 0.0;
    let mut y = y0;
    let steps = (t_end / h - 1e-9).ceil().max(0.0) as usize;
    for i in 0..steps {
        let t_next = if i + 1 == steps { t_end } else { (i + 1) as f64 * h };
        let dt = t_next - t;
        let k1 = f(t, &y)?;
        let k2 = f(t + dt / 2.0, &axpy(&y, &k1, dt / 2.0))?;
        let k3 = f(t + dt / 2.0, &axpy(&y, &k2, dt / 2.0))?;
        let k4 = f(t + dt, &axpy(&y, &k3, dt))?;
        for j in 0..N {
            y[j] += dt / 6.0 * (k1[j] + 2.0 * k2[j] + 2.0 * k3[j] + k4[j]);
        }
        if y.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite);
        }
        t = t_next;
        out.push((t, y));
    }
    Ok(out)
}

fn finite(v: f64) -> Result<f64> {
    if v.is_finite() {
        Ok(v)
    } else {
        Err(Error::NonFinite)
    }
}

/// Simple car: `ẋ = u_s cos ψ`, `ẏ = u_s sin ψ`, `ψ̇ = u_s tan(u_φ) / L`.
///
/// `speed` and `steering` are input signals over the offset `[0, duration]`.
pub fn simple_car_integrate(
    position: Vec2,
    yaw: f64,
    speed: impl Fn(f64) -> f64,
    steering: impl Fn(f64) -> f64,
    duration: f64,
    wheelbase: f64,
    step: f64,
) -> Result<Trajectory> {
    if !(wheelbase > 0.0) {
        return Err(Error::InvalidParameter("wheelbase must be positive".into()));
    }
    let rhs = |t: f64, y: &[f64; 3]| -> Result<[f64; 3]> {
        let us = finite(speed(t))?;
        let phi = finite(steering(t))?;
        Ok([us * y[2].cos(), us * y[2].sin(), us * phi.tan() / wheelbase])
    };
    let samples = rk4(rhs, [position.x, position.y, yaw], duration, step)?;
    to_trajectory(samples.iter().map(|(t, y)| (*t, Vec2::new(y[0], y[1]), y[2])), &speed)
}

/// Car with the steering angle as a state driven by the steering rate `u_θ`.
pub fn continuous_steering_integrate(
    position: Vec2,
    yaw: f64,
    steering: f64,
    speed: impl Fn(f64) -> f64,
    steering_rate: impl Fn(f64) -> f64,
    duration: f64,
    wheelbase: f64,
    step: f64,
) -> Result<Trajectory> {
    if !(wheelbase > 0.0) {
        return Err(Error::InvalidParameter("wheelbase must be positive".into()));
    }
    let rhs = |t: f64, y: &[f64; 4]| -> Result<[f64; 4]> {
        let us = finite(speed(t))?;
        let rate = finite(steering_rate(t))?;
        Ok([us * y[2].cos(), us * y[2].sin(), us * y[3].tan() / wheelbase, rate])
    };
    let samples = rk4(rhs, [position.x, position.y, yaw, steering], duration, step)?;
    to_trajectory(samples.iter().map(|(t, y)| (*t, Vec2::new(y[0], y[1]), y[2])), &speed)
}

fn to_trajectory(
    samples: impl Iterator<Item = (f64, Vec2, f64)>,
    speed: &impl Fn(f64) -> f64,
) -> Result<Trajectory> {
    let points = samples
        .map(|(t, p, psi)| TrajectoryPoint {
            t,
            position: p,
            heading: psi,
            velocity: Vec2::from_angle(psi) * speed(t),
        })
        .collect();
    Trajectory::new(points)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_steering_is_straight() {
        let tr = simple_car_integrate(Vec2::ZERO, 0.0, |_| 10.0, |_| 0.0, 3.0, 2.7, 0.01).unwrap();
        let end = tr.last().position;
        assert!((end.x - 30.0).abs() < 1e-9 && end.y.abs() < 1e-12);
        assert_eq!(tr.end_time(), 3.0);
    }

    #[test]
    fn constant_steering_follows_circle() {
        let (l, phi, v) = (2.5, 0.2f64, 8.0);
        let r = l / phi.tan();
        let tr = simple_car_integrate(Vec2::ZERO, 0.0, |_| v, |_| phi, 4.0, l, 0.01).unwrap();
        let center = Vec2::new(0.0, r);
        for p in tr.points() {
            assert!((p.position.distance(center) - r).abs() < 1e-8);
        }
    }

    #[test]
    fn zero_duration_gives_single_sample() {
        let tr = simple_car_integrate(Vec2::new(1.0, 2.0), 0.3, |_| 5.0, |_| 0.1, 0.0, 2.5, 0.01).unwrap();
        assert_eq!(tr.points().len(), 1);
        assert_eq!(tr.start().position, Vec2::new(1.0, 2.0));
    }

    #[test]
    fn non_finite_input_is_rejected() {
        let r = simple_car_integrate(Vec2::ZERO, 0.0, |_| f64::NAN, |_| 0.0, 1.0, 2.5, 0.01);
        assert_eq!(r, Err(Error::NonFinite));
    }

    #[test]
    fn zero_rate_matches_simple_car() {
        let a = continuous_steering_integrate(Vec2::ZERO, 0.0, 0.1, |_| 10.0, |_| 0.0, 2.0, 2.5, 0.01).unwrap();
        let b = simple_car_integrate(Vec2::ZERO, 0.0, |_| 10.0, |_| 0.1, 2.0, 2.5, 0.01).unwrap();
        for (p, q) in a.points().iter().zip(b.points()) {
            assert!(p.position.distance(q.position) < 1e-12);
        }
    }

    #[test]
    fn zero_speed_holds_position() {
        let tr = continuous_steering_integrate(Vec2::new(3.0, 4.0), 1.0, 0.0, |_| 0.0, |_| 0.3, 2.0, 2.5, 0.01)
            .unwrap();
        assert_eq!(tr.last().position, Vec2::new(3.0, 4.0));
    }
}
