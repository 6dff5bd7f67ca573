//! Potential fields and gradient-descent motion.

use alloc::vec::Vec;
use core::fmt::Debug;

#[allow(unused_imports)] // float methods come from std when it is linked
use num_traits::Float;

use crate::error::{Error, Result};
use crate::geometry::Vec2;

/// Scalar field over the plane.
pub trait PotentialField: Debug + Send + Sync {
    fn value(&self, p: Vec2) -> f64;
}

/// `amplitude * exp(-d² / (2 σ²))` around `center`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Gaussian {
    pub center: Vec2,
    pub amplitude: f64,
    pub sigma: f64,
}

impl PotentialField for Gaussian {
    fn value(&self, p: Vec2) -> f64 {
        let d2 = (p - self.center).norm_squared();
        self.amplitude * (-d2 / (2.0 * self.sigma * self.sigma)).exp()
    }
}

/// `scale * ‖p − center‖²`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QuadraticBowl {
    pub center: Vec2,
    pub scale: f64,
}

impl PotentialField for QuadraticBowl {
    fn value(&self, p: Vec2) -> f64 {
        self.scale * (p - self.center).norm_squared()
    }
}

/// `gradient · p + offset`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LinearRamp {
    pub gradient: Vec2,
    pub offset: f64,
}

impl PotentialField for LinearRamp {
    fn value(&self, p: Vec2) -> f64 {
        self.gradient.dot(p) + self.offset
    }
}

/// Constant value, e.g. a potential already evaluated elsewhere.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ConstantPotential(pub f64);

impl PotentialField for ConstantPotential {
    fn value(&self, _p: Vec2) -> f64 {
        self.0
    }
}

pub fn combined(potentials: &[&dyn PotentialField], p: Vec2) -> f64 {
    potentials.iter().map(|u| u.value(p)).sum()
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DescentConfig {
    pub step: f64,
    pub iterations: usize,
    /// Central-difference spacing.
    pub h: f64,
    pub max_halvings: u32,
    /// Stop once the gradient norm falls below this value.
    pub gradient_tolerance: f64,
}

impl Default for DescentConfig {
    fn default() -> Self {
        DescentConfig { step: 0.1, iterations: 1000, h: 1e-5, max_halvings: 30, gradient_tolerance: 1e-9 }
    }
}

pub fn numerical_gradient(potentials: &[&dyn PotentialField], p: Vec2, h: f64) -> Vec2 {
    let f = |q| combined(potentials, q);
    let dx = Vec2::new(h, 0.0);
    let dy = Vec2::new(0.0, h);
    Vec2::new((f(p + dx) - f(p - dx)) / (2.0 * h), (f(p + dy) - f(p - dy)) / (2.0 * h))
}

/// Gradient-descent path on the summed potential, starting at `start`.
///
/// The combined potential never increases along the returned path: a step
/// that would increase it is halved, and descent fails after
/// `max_halvings` consecutive halvings.
pub fn potential_descent(start: Vec2, potentials: &[&dyn PotentialField], cfg: &DescentConfig) -> Result<Vec<Vec2>> {
    if !(cfg.step > 0.0 && cfg.h > 0.0) {
        return Err(Error::InvalidParameter("descent step and spacing must be positive".into()));
    }
    let mut path = alloc::vec![start];
    let mut p = start;
    let mut u = combined(potentials, p);
    let mut step = cfg.step;
    for _ in 0..cfg.iterations {
        let g = numerical_gradient(potentials, p, cfg.h);
        if !g.is_finite() {
            return Err(Error::NonFinite);
        }
        if g.norm() < cfg.gradient_tolerance {
            break;
        }
        let mut halvings = 0;
        loop {
            let candidate = p - g * step;
            let uc = combined(potentials, candidate);
            if uc <= u {
                p = candidate;
                u = uc;
                break;
            }
            halvings += 1;
            if halvings > cfg.max_halvings {
                return Err(Error::Diverged { halvings: cfg.max_halvings });
            }
            step /= 2.0;
        }
        path.push(p);
    }
    Ok(path)
}
