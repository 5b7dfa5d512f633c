use crate::error::Result;
use crate::grid::{Grid1D, Grid2D};
use crate::mixture::{normal_pdf, GaussianMixture1D};
use crate::params::PhysicalParams;
use crate::state::HybridState;

use super::{initial_quantum_density, pointer_marginal_exact};

/// Joint density after a rigid shear `x → x − q·k` of the initial product
/// state. The phase is identically zero.
#[derive(Debug, Clone, PartialEq)]
pub struct JointAnalytic {
    pub params: PhysicalParams,
    pub k: f64,
    quantum: GaussianMixture1D,
}

impl JointAnalytic {
    pub fn density(&self, x: f64, q: f64) -> f64 {
        normal_pdf(x - q * self.k, 0.0, self.params.sigma_c) * self.quantum.pdf(q)
    }

    pub fn ln_density(&self, x: f64, q: f64) -> f64 {
        let z = (x - q * self.k) / self.params.sigma_c;
        -0.5 * z * z
            - (self.params.sigma_c * (2.0 * std::f64::consts::PI).sqrt()).ln()
            + self.quantum.ln_pdf(q)
    }

    pub fn phase(&self, _x: f64, _q: f64) -> f64 {
        0.0
    }

    pub fn sample_density(&self, grid: &Grid2D) -> Vec<f64> {
        grid.sample(|x, q| self.density(x, q))
    }

    /// Samples the joint on `grid` as a state at time `t`.
    pub fn to_state(&self, grid: Grid2D, t: f64) -> Result<HybridState> {
        HybridState::new(grid, self.sample_density(&grid), vec![0.0; grid.len()], t)
    }
}

/// Product of the pointer Gaussian and the two-packet quantum density, `k = 0`.
pub fn initial_joint(p: &PhysicalParams) -> JointAnalytic {
    JointAnalytic {
        params: *p,
        k: 0.0,
        quantum: initial_quantum_density(p),
    }
}

/// Applies a further shear by `k`; shears compose additively.
pub fn shifted_joint(j: &JointAnalytic, k: f64) -> JointAnalytic {
    JointAnalytic {
        k: j.k + k,
        ..j.clone()
    }
}

/// Grid covering `±8σ` of the widest pointer and quantum components at
/// strength `k`.
pub fn default_grid(p: &PhysicalParams, k: f64, nx: usize, nq: usize) -> Result<Grid2D> {
    let (xl, xh) = pointer_marginal_exact(p, k).support(8.0);
    let (ql, qh) = initial_quantum_density(p).support(8.0);
    let half_x = xl.abs().max(xh.abs());
    let half_q = ql.abs().max(qh.abs());
    Ok(Grid2D::new(
        Grid1D::centered(0.0, half_x, nx)?,
        Grid1D::centered(0.0, half_q, nq)?,
    ))
}
