//! Linear one-track (single-track) lateral dynamics.

use crate::error::{Error, Result};

/// Vehicle parameters; cornering stiffnesses in N/rad.
#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct OneTrackParams {
    pub c_af: f64,
    pub c_ar: f64,
    pub l_f: f64,
    pub l_r: f64,
    pub mass: f64,
    pub inertia_z: f64,
}

impl Default for OneTrackParams {
    fn default() -> Self {
        OneTrackParams { c_af: 80_000.0, c_ar: 90_000.0, l_f: 1.2, l_r: 1.4, mass: 1500.0, inertia_z: 2500.0 }
    }
}

impl OneTrackParams {
    pub fn validate(&self) -> Result<()> {
        let all = [self.c_af, self.c_ar, self.l_f, self.l_r, self.mass, self.inertia_z];
        if all.iter().all(|v| *v > 0.0 && v.is_finite()) {
            Ok(())
        } else {
            Err(Error::InvalidParameter("one-track parameters must be positive".into()))
        }
    }
}

/// Speeds at or below this value (m/s) are treated as standstill.
pub const V_EPS: f64 = 1e-3;

fn derivative(p: &OneTrackParams, v: f64, delta_f: f64, beta: f64, omega: f64) -> (f64, f64) {
    let m = p.mass;
    let a11 = -(p.c_af + p.c_ar) / (m * v);
    let a12 = (p.c_ar * p.l_r - p.c_af * p.l_f) / (m * v * v) - 1.0;
    let a21 = (p.c_ar * p.l_r - p.c_af * p.l_f) / p.inertia_z;
    let a22 = -(p.c_af * p.l_f * p.l_f + p.c_ar * p.l_r * p.l_r) / (p.inertia_z * v);
    let b1 = p.c_af / (m * v);
    let b2 = p.c_af * p.l_f / p.inertia_z;
    (a11 * beta + a12 * omega + b1 * delta_f, a21 * beta + a22 * omega + b2 * delta_f)
}

/// One RK4 step of sideslip `beta` and yaw rate `omega` at constant speed `v`.
pub fn one_track_step(beta: f64, omega: f64, v: f64, params: &OneTrackParams, delta_f: f64, t: f64) -> Result<(f64, f64)> {
    params.validate()?;
    if !(v > V_EPS) {
        return Err(Error::Standstill);
    }
    if ![beta, omega, v, delta_f, t].iter().all(|x| x.is_finite()) {
        return Err(Error::NonFinite);
    }
    let f = |b: f64, w: f64| derivative(params, v, delta_f, b, w);
    let k1 = f(beta, omega);
    let k2 = f(beta + t / 2.0 * k1.0, omega + t / 2.0 * k1.1);
    let k3 = f(beta + t / 2.0 * k2.0, omega + t / 2.0 * k2.1);
    let k4 = f(beta + t * k3.0, omega + t * k3.1);
    Ok((
        beta + t / 6.0 * (k1.0 + 2.0 * k2.0 + 2.0 * k3.0 + k4.0),
        omega + t / 6.0 * (k1.1 + 2.0 * k2.1 + 2.0 * k3.1 + k4.1),
    ))
}
