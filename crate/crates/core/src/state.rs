//! The sampled `(P, S)` pair of a hybrid ensemble.

use crate::error::{Error, Result};
use crate::grid::Grid2D;
use crate::quadrature::integrate_2d;

/// Default tolerance on `|∫∫P − 1|`.
pub const NORMALIZATION_TOL: f64 = 1e-6;

/// Density `P` and phase `S` sampled on a grid at time `t`.
#[derive(Debug, Clone, PartialEq)]
pub struct HybridState {
    pub grid: Grid2D,
    pub p: Vec<f64>,
    pub s: Vec<f64>,
    pub t: f64,
}

impl HybridState {
    /// Checks lengths, finiteness, and `P ≥ 0`. Normalisation is checked
    /// separately by [`check_normalized`](Self::check_normalized).
    pub fn new(grid: Grid2D, p: Vec<f64>, s: Vec<f64>, t: f64) -> Result<Self> {
        grid.check_len(p.len())?;
        grid.check_len(s.len())?;
        if p.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFiniteField("P"));
        }
        if s.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFiniteField("S"));
        }
        if let Some((index, &value)) = p.iter().enumerate().find(|(_, v)| **v < 0.0) {
            return Err(Error::DensityFloorViolation {
                index,
                value,
                floor: 0.0,
            });
        }
        Ok(Self { grid, p, s, t })
    }

    pub fn from_fn(
        grid: Grid2D,
        t: f64,
        p: impl Fn(f64, f64) -> f64 + Sync,
        s: impl Fn(f64, f64) -> f64 + Sync,
    ) -> Result<Self> {
        Self::new(grid, grid.sample(p), grid.sample(s), t)
    }

    pub fn mass(&self) -> f64 {
        integrate_2d(&self.p, &self.grid).expect("length checked on construction")
    }

    pub fn check_normalized(&self, tol: f64) -> Result<f64> {
        let m = self.mass();
        if (m - 1.0).abs() <= tol {
            Ok(m)
        } else {
            Err(Error::InvalidConfig(format!(
                "state integrates to {m}, outside 1 ± {tol}"
            )))
        }
    }
}
