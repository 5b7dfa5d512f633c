use rayon::prelude::*;

use super::scheme::Flux;
use crate::diff::{d1_2d, d2_2d, Axis};
use crate::error::{Error, Result};
use crate::grid::Grid2D;
use crate::params::PhysicalParams;
use crate::state::HybridState;

/// Smallest density, relative to the maximum, that is passed to `ln`.
pub(crate) const LOG_FLOOR: f64 = 1e-250;

/// Grid and parameter data shared by every stage of a step.
pub(crate) struct Operator<'a> {
    pub grid: &'a Grid2D,
    pub qs: Vec<f64>,
    pub hx: f64,
    pub hq: f64,
    pub pointer_mass: f64,
    pub quantum_mass: f64,
    pub hbar: f64,
    pub flux: Flux,
    pub potential: Option<&'a [f64]>,
}

impl<'a> Operator<'a> {
    pub fn new(
        grid: &'a Grid2D,
        p: &PhysicalParams,
        flux: Flux,
        potential: Option<&'a [f64]>,
    ) -> Result<Self> {
        let (nx, nq) = grid.shape();
        if nx < 4 || nq < 4 {
            return Err(Error::GridTooCoarse(format!(
                "{nx}×{nq} grid; finite differences need 4 points per axis"
            )));
        }
        if let Some(v) = potential {
            grid.check_len(v.len())?;
            if v.iter().any(|x| !x.is_finite()) {
                return Err(Error::NonFiniteField("V"));
            }
        }
        Ok(Self {
            grid,
            qs: grid.q.points(),
            hx: grid.x.spacing(),
            hq: grid.q.spacing(),
            pointer_mass: p.pointer_mass,
            quantum_mass: p.quantum_mass,
            hbar: p.hbar,
            flux,
            potential,
        })
    }

    fn shape(&self) -> (usize, usize) {
        self.grid.shape()
    }

    /// `α q ∂ₓ f` with the configured flux.
    pub fn coupling(&self, f: &[f64], alpha: f64) -> Vec<f64> {
        let (nx, nq) = self.shape();
        let mut out = vec![0.0; f.len()];
        if alpha == 0.0 {
            return out;
        }
        match self.flux {
            Flux::Central => {
                let fx = d1_2d(f, (nx, nq), self.hx, Axis::X);
                out.par_chunks_mut(nq).enumerate().for_each(|(i, row)| {
                    for (j, o) in row.iter_mut().enumerate() {
                        *o = alpha * self.qs[j] * fx[i * nq + j];
                    }
                });
            }
            Flux::Upwind => {
                let h = self.hx;
                out.par_chunks_mut(nq).enumerate().for_each(|(i, row)| {
                    for (j, o) in row.iter_mut().enumerate() {
                        let c = alpha * self.qs[j];
                        let at = |k: usize| f[k * nq + j];
                        let d = if c > 0.0 {
                            match i {
                                0 => 0.0,
                                1 => (at(1) - at(0)) / h,
                                _ => (3.0 * at(i) - 4.0 * at(i - 1) + at(i - 2)) / (2.0 * h),
                            }
                        } else if c < 0.0 {
                            if i == nx - 1 {
                                0.0
                            } else if i == nx - 2 {
                                (at(i + 1) - at(i)) / h
                            } else {
                                (-3.0 * at(i) + 4.0 * at(i + 1) - at(i + 2)) / (2.0 * h)
                            }
                        } else {
                            0.0
                        };
                        *o = c * d;
                    }
                });
            }
        }
        out
    }

    /// Coupling-only right-hand side `(−α q ∂ₓ P, −α q ∂ₓ S)`.
    pub fn advection(&self, p: &[f64], s: &[f64], alpha: f64) -> (Vec<f64>, Vec<f64>) {
        let mut dp = self.coupling(p, alpha);
        let mut ds = self.coupling(s, alpha);
        dp.iter_mut().for_each(|v| *v = -*v);
        ds.iter_mut().for_each(|v| *v = -*v);
        (dp, ds)
    }

    /// Full right-hand side for `(u, S)` with `u = ln P`.
    pub fn log_form(&self, u: &[f64], s: &[f64], alpha: f64) -> (Vec<f64>, Vec<f64>) {
        let shape = self.shape();
        let (hx, hq) = (self.hx, self.hq);
        let (mm, m) = (self.pointer_mass, self.quantum_mass);
        let ux = d1_2d(u, shape, hx, Axis::X);
        let uq = d1_2d(u, shape, hq, Axis::Q);
        let uqq = d2_2d(u, shape, hq, Axis::Q);
        let sx = d1_2d(s, shape, hx, Axis::X);
        let sq = d1_2d(s, shape, hq, Axis::Q);
        let sxx = d2_2d(s, shape, hx, Axis::X);
        let sqq = d2_2d(s, shape, hq, Axis::Q);
        let cu = self.coupling(u, alpha);
        let cs = self.coupling(s, alpha);
        let quantum = self.hbar * self.hbar / (2.0 * m);

        let mut du = vec![0.0; u.len()];
        let mut ds = vec![0.0; u.len()];
        du.par_iter_mut()
            .zip(ds.par_iter_mut())
            .enumerate()
            .for_each(|(k, (a, b))| {
                *a = -cu[k] - (sqq[k] + sq[k] * uq[k]) / m - (sxx[k] + sx[k] * ux[k]) / mm;
                *b = -cs[k] - sq[k] * sq[k] / (2.0 * m) - sx[k] * sx[k] / (2.0 * mm)
                    + quantum * (0.25 * uq[k] * uq[k] + 0.5 * uqq[k]);
                if let Some(v) = self.potential {
                    *b -= v[k];
                }
            });
        (du, ds)
    }
}

pub(crate) fn log_density(p: &[f64]) -> Vec<f64> {
    let top = p.iter().cloned().fold(0.0, f64::max);
    let floor = (top * LOG_FLOOR).max(f64::MIN_POSITIVE);
    p.iter().map(|v| v.max(floor).ln()).collect()
}

/// Time derivatives `(∂P/∂t, ∂S/∂t)` of the coupled hybrid equations with
/// coupling rate `alpha` and an optional external potential `v` sampled on
/// the state grid.
///
/// Derivatives are formed through `ln P`; the continuity right-hand side is
/// returned as `P ∂(ln P)/∂t`.
pub fn hybrid_time_derivatives(
    state: &HybridState,
    p: &PhysicalParams,
    alpha: f64,
    v: Option<&[f64]>,
) -> Result<(Vec<f64>, Vec<f64>)> {
    if !alpha.is_finite() {
        return Err(Error::NonFiniteField("alpha"));
    }
    if state.p.iter().any(|x| !x.is_finite()) {
        return Err(Error::NonFiniteField("P"));
    }
    if state.s.iter().any(|x| !x.is_finite()) {
        return Err(Error::NonFiniteField("S"));
    }
    let op = Operator::new(&state.grid, p, Flux::Central, v)?;
    let u = log_density(&state.p);
    let (du, ds) = op.log_form(&u, &state.s, alpha);
    let dp: Vec<f64> = state.p.iter().zip(&du).map(|(a, b)| a * b).collect();
    if dp.iter().any(|x| !x.is_finite()) {
        return Err(Error::NonFiniteField("dP/dt"));
    }
    if ds.iter().any(|x| !x.is_finite()) {
        return Err(Error::NonFiniteField("dS/dt"));
    }
    Ok((dp, ds))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analytic::{free_quantum_state, initial_joint, shifted_joint};
    use crate::grid::Grid1D;
    use crate::mixture::normal_pdf;

    fn max_abs(v: &[f64]) -> f64 {
        v.iter().map(|x| x.abs()).fold(0.0, f64::max)
    }

    #[test]
    fn static_classical_ensemble_has_zero_derivatives() {
        let p = PhysicalParams {
            hbar: 0.0,
            ..PhysicalParams::default()
        };
        let g = Grid2D::new(
            Grid1D::new(-1.0, 1.0, 21).unwrap(),
            Grid1D::new(-2.0, 2.0, 31).unwrap(),
        );
        let st = HybridState::from_fn(
            g,
            0.0,
            |x, q| normal_pdf(x, 0.1, 0.3) * (normal_pdf(q, 0.5, 0.4) + 0.2),
            |_, _| 0.0,
        )
        .unwrap();
        let (dp, ds) = hybrid_time_derivatives(&st, &p, 0.0, None).unwrap();
        assert_eq!(max_abs(&dp), 0.0);
        assert_eq!(max_abs(&ds), 0.0);
    }

    #[test]
    fn shifted_joint_continuity_is_coupling_advection() {
        let p = PhysicalParams::default();
        let joint = shifted_joint(&initial_joint(&p), 0.3);
        let g = crate::analytic::default_grid(&p, 0.3, 201, 201).unwrap();
        let st = joint.to_state(g, 0.0).unwrap();
        let (dp, _) = hybrid_time_derivatives(&st, &p, p.lambda, None).unwrap();
        let exact = g.sample(|x, q| {
            let k = joint.k;
            // ∂ₓ of the pointer factor at x − qk.
            let dx = -(x - q * k) / (p.sigma_c * p.sigma_c);
            -p.lambda * q * joint.density(x, q) * dx
        });
        let err: Vec<f64> = dp.iter().zip(&exact).map(|(a, b)| a - b).collect();
        assert!(max_abs(&err) / max_abs(&exact) < 1e-4);
    }

    #[test]
    fn free_packet_continuity_matches_closed_form() {
        let p = PhysicalParams {
            q0: 0.0,
            ..PhysicalParams::default()
        };
        let t = 0.01;
        let g = Grid2D::new(
            Grid1D::new(-1.0, 1.0, 5).unwrap(),
            Grid1D::new(-1.0, 1.0, 801).unwrap(),
        );
        let f = free_quantum_state(&p, t);
        let st = HybridState::from_fn(
            g,
            t,
            |_, q| f.packet_density(true, q) / 2.0,
            |_, q| f.packet_phase(true, q),
        )
        .unwrap();
        let (dp, _) = hybrid_time_derivatives(&st, &p, 0.0, None).unwrap();
        let dt = 1e-6;
        let (a, b) = (free_quantum_state(&p, t + dt), free_quantum_state(&p, t - dt));
        let exact =
            g.sample(|_, q| (a.packet_density(true, q) - b.packet_density(true, q)) / (4.0 * dt));
        let err: Vec<f64> = dp.iter().zip(&exact).map(|(x, y)| x - y).collect();
        assert!(max_abs(&err) / max_abs(&exact) < 1e-3, "{}", max_abs(&err) / max_abs(&exact));
    }

    #[test]
    fn potential_enters_phase_equation() {
        let p = PhysicalParams {
            hbar: 0.0,
            ..PhysicalParams::default()
        };
        let g = Grid2D::new(
            Grid1D::new(-1.0, 1.0, 11).unwrap(),
            Grid1D::new(-1.0, 1.0, 11).unwrap(),
        );
        let st = HybridState::from_fn(g, 0.0, |_, _| 0.25, |_, _| 0.0).unwrap();
        let v = g.sample(|x, q| x * q);
        let (_, ds) = hybrid_time_derivatives(&st, &p, 0.0, Some(&v)).unwrap();
        assert!(ds.iter().zip(&v).all(|(a, b)| (a + b).abs() < 1e-15));
        assert!(hybrid_time_derivatives(&st, &p, 0.0, Some(&v[..3])).is_err());
    }

    #[test]
    fn upwind_and_central_agree_on_linear_profile() {
        let p = PhysicalParams::default();
        let g = Grid2D::new(
            Grid1D::new(-1.0, 1.0, 21).unwrap(),
            Grid1D::new(-1.0, 1.0, 11).unwrap(),
        );
        let f = g.sample(|x, _| 2.0 * x + 1.0);
        let a = Operator::new(&g, &p, Flux::Upwind, None).unwrap();
        let b = Operator::new(&g, &p, Flux::Central, None).unwrap();
        let (ua, ub) = (a.coupling(&f, 1.5), b.coupling(&f, 1.5));
        let nq = 11;
        for i in 2..19 {
            for j in 0..nq {
                let k = i * nq + j;
                assert!((ua[k] - ub[k]).abs() < 1e-12);
            }
        }
    }
}
