use crate::error::{Error, Result};
use crate::params::PhysicalParams;

/// A classical action `S(x, t)` with analytic partial derivatives.
pub trait ClassicalAction {
    fn value(&self, x: f64, t: f64) -> f64;
    fn dx(&self, x: f64, t: f64) -> f64;
    fn dt(&self, x: f64, t: f64) -> f64;
    fn mass(&self) -> f64;

    /// `∂S/∂t + (∂S/∂x)²/2M` for a free particle.
    fn hj_residual(&self, x: f64, t: f64) -> f64 {
        let g = self.dx(x, t);
        self.dt(x, t) + g * g / (2.0 * self.mass())
    }

    fn velocity(&self, x: f64, t: f64) -> f64 {
        self.dx(x, t) / self.mass()
    }
}

/// Action of the mixture element with label `q`: a pointer moving at `λq`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ElementAction {
    pub q: f64,
    pub lambda: f64,
    pub mass: f64,
}

impl ElementAction {
    pub fn new(q: f64, p: &PhysicalParams) -> Self {
        Self {
            q,
            lambda: p.lambda,
            mass: p.pointer_mass,
        }
    }
}

impl ClassicalAction for ElementAction {
    fn value(&self, x: f64, t: f64) -> f64 {
        let v = self.lambda * self.q;
        -self.mass * v * v * t / 2.0 + self.mass * v * x
    }
    fn dx(&self, _x: f64, _t: f64) -> f64 {
        self.mass * self.lambda * self.q
    }
    fn dt(&self, _x: f64, _t: f64) -> f64 {
        let v = self.lambda * self.q;
        -self.mass * v * v / 2.0
    }
    fn mass(&self) -> f64 {
        self.mass
    }
}

/// `M x² / 2t`: all trajectories leave the origin at `t = 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GlobalAction {
    pub mass: f64,
}

impl ClassicalAction for GlobalAction {
    fn value(&self, x: f64, t: f64) -> f64 {
        self.mass * x * x / (2.0 * t)
    }
    fn dx(&self, x: f64, t: f64) -> f64 {
        self.mass * x / t
    }
    fn dt(&self, x: f64, t: f64) -> f64 {
        -self.mass * x * x / (2.0 * t * t)
    }
    fn mass(&self) -> f64 {
        self.mass
    }
}

pub fn pointer_action_global(x: f64, t: f64, mass: f64) -> Result<f64> {
    if t == 0.0 {
        return Err(Error::ZeroTime);
    }
    Ok(GlobalAction { mass }.value(x, t))
}

pub fn element_action(x: f64, t: f64, q: f64, p: &PhysicalParams) -> f64 {
    ElementAction::new(q, p).value(x, t)
}
