use serde::Serialize;

use crate::diff::{d1, d1_2d, Axis};
use crate::error::{Error, Result};
use crate::grid::{Grid1D, Grid2D};
use crate::params::PhysicalParams;
use crate::quadrature::{integrate_1d, integrate_2d, marginal_q, marginal_x};
use crate::state::HybridState;

/// Values of the three ensemble Hamiltonian functionals and their sum.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EnergyBreakdown {
    pub h_c: f64,
    pub h_q: f64,
    pub h_cq: f64,
    pub total: f64,
}

fn resolved_width(grid: &Grid1D, marginal: &[f64], name: &str) -> Result<()> {
    if grid.len() < 4 {
        return Err(Error::GridTooCoarse(format!("{name}-axis has {} points", grid.len())));
    }
    let xs = grid.points();
    let mass = integrate_1d(marginal, grid)?;
    if mass <= 0.0 {
        return Ok(());
    }
    let m1: Vec<f64> = marginal.iter().zip(&xs).map(|(p, x)| p * x).collect();
    let mean = integrate_1d(&m1, grid)? / mass;
    let m2: Vec<f64> = marginal
        .iter()
        .zip(&xs)
        .map(|(p, x)| p * (x - mean) * (x - mean))
        .collect();
    let std = (integrate_1d(&m2, grid)? / mass).max(0.0).sqrt();
    if std < 3.0 * grid.spacing() {
        return Err(Error::GridTooCoarse(format!(
            "{name}-spread {std:.3e} is under three grid spacings ({:.3e})",
            grid.spacing()
        )));
    }
    Ok(())
}

fn check_resolution(state: &HybridState) -> Result<()> {
    resolved_width(&state.grid.x, &marginal_x(&state.p, &state.grid)?, "x")?;
    resolved_width(&state.grid.q, &marginal_q(&state.p, &state.grid)?, "q")
}

/// Fisher-information integrand `(∂_q P)² / P` on the grid.
///
/// Strictly positive densities are differentiated through `ln P`, which is
/// exact for Gaussian profiles; otherwise `P` itself is differentiated and
/// empty cells contribute nothing.
pub(crate) fn fisher_density(p: &[f64], grid: &Grid2D) -> Vec<f64> {
    let shape = grid.shape();
    let hq = grid.q.spacing();
    if p.iter().all(|v| *v > 0.0) {
        let u: Vec<f64> = p.iter().map(|v| v.ln()).collect();
        let uq = d1_2d(&u, shape, hq, Axis::Q);
        p.iter().zip(&uq).map(|(pi, g)| pi * g * g).collect()
    } else {
        let pq = d1_2d(p, shape, hq, Axis::Q);
        p.iter()
            .zip(&pq)
            .map(|(pi, g)| if *pi > 0.0 { g * g / pi } else { 0.0 })
            .collect()
    }
}

/// Classical kinetic, quantum and coupling functionals for coupling rate `alpha`.
pub fn ensemble_energy(
    state: &HybridState,
    p: &PhysicalParams,
    alpha: f64,
) -> Result<EnergyBreakdown> {
    check_resolution(state)?;
    let g = &state.grid;
    let shape = g.shape();
    let sx = d1_2d(&state.s, shape, g.x.spacing(), Axis::X);
    let sq = d1_2d(&state.s, shape, g.q.spacing(), Axis::Q);
    let nq = g.q.len();

    let kin_c: Vec<f64> = state
        .p
        .iter()
        .zip(&sx)
        .map(|(pi, s)| pi * s * s / (2.0 * p.pointer_mass))
        .collect();
    let kin_q: Vec<f64> = state
        .p
        .iter()
        .zip(&sq)
        .map(|(pi, s)| pi * s * s / (2.0 * p.quantum_mass))
        .collect();
    let coupling: Vec<f64> = state
        .p
        .iter()
        .zip(&sx)
        .enumerate()
        .map(|(idx, (pi, s))| pi * g.q.point(idx % nq) * s)
        .collect();

    let h_c = integrate_2d(&kin_c, g)?;
    let fisher = if p.hbar == 0.0 {
        0.0
    } else {
        integrate_2d(&fisher_density(&state.p, g), g)?
    };
    let h_q = integrate_2d(&kin_q, g)? + p.hbar * p.hbar / (8.0 * p.quantum_mass) * fisher;
    let h_cq = alpha * integrate_2d(&coupling, g)?;
    Ok(EnergyBreakdown {
        h_c,
        h_q,
        h_cq,
        total: h_c + h_q + h_cq,
    })
}

/// `−∫∫ P ∂S/∂t`, the integral of the local energy density.
pub fn local_energy_integral(state: &HybridState, ds_dt: &[f64]) -> Result<f64> {
    state.grid.check_len(ds_dt.len())?;
    let f: Vec<f64> = state.p.iter().zip(ds_dt).map(|(a, b)| -a * b).collect();
    integrate_2d(&f, &state.grid)
}

/// `∫ P (∂S/∂x)² / 2M` for a one-dimensional classical ensemble.
pub fn classical_energy_1d(grid: &Grid1D, p: &[f64], s: &[f64], mass: f64) -> Result<f64> {
    grid.check_len(p.len())?;
    grid.check_len(s.len())?;
    resolved_width(grid, p, "x")?;
    let sx = d1(s, grid.spacing());
    let f: Vec<f64> = p.iter().zip(&sx).map(|(a, g)| a * g * g / (2.0 * mass)).collect();
    integrate_1d(&f, grid)
}

/// `−∫ P ∂S/∂t` for a one-dimensional ensemble.
pub fn local_energy_1d(grid: &Grid1D, p: &[f64], ds_dt: &[f64]) -> Result<f64> {
    grid.check_len(p.len())?;
    grid.check_len(ds_dt.len())?;
    let f: Vec<f64> = p.iter().zip(ds_dt).map(|(a, b)| -a * b).collect();
    integrate_1d(&f, grid)
}

/// `P ∂S/∂axis`, whose integral is the total momentum along that axis.
pub fn momentum_density(state: &HybridState, axis: Axis) -> Result<Vec<f64>> {
    check_resolution(state)?;
    let h = match axis {
        Axis::X => state.grid.x.spacing(),
        Axis::Q => state.grid.q.spacing(),
    };
    let g = d1_2d(&state.s, state.grid.shape(), h, axis);
    Ok(state.p.iter().zip(&g).map(|(a, b)| a * b).collect())
}

/// Density after the flow generated by total momentum for a small
/// displacement `delta`, to first order: `P − δ ∂P/∂axis`.
pub fn translate_first_order(state: &HybridState, axis: Axis, delta: f64) -> Result<Vec<f64>> {
    check_resolution(state)?;
    let h = match axis {
        Axis::X => state.grid.x.spacing(),
        Axis::Q => state.grid.q.spacing(),
    };
    let g = d1_2d(&state.p, state.grid.shape(), h, axis);
    Ok(state.p.iter().zip(&g).map(|(a, b)| a - delta * b).collect())
}
