use rayon::prelude::*;
use serde::Serialize;

use super::rhs::{log_density, Operator};
use super::scheme::{Scheme, SchemeConfig};
use crate::alpha::AlphaProfile;
use crate::analytic::ensemble_energy;
use crate::diff::{d1_2d, Axis};
use crate::error::{Error, Result};
use crate::params::PhysicalParams;
use crate::quadrature::{integrate_1d, l1_distance_2d, marginal_q, marginal_x};
use crate::state::HybridState;

/// Relative mass drift above which a step renormalises `P`.
pub const RENORMALIZE_THRESHOLD: f64 = 1e-12;

/// Cells below this fraction of the peak density do not constrain the time step.
const ACTIVE_FRACTION: f64 = 1e-10;

/// Stability bound of RK4 for the dispersive `∂²` terms, in units of `m h²/ħ`.
const DISPERSIVE_BOUND: f64 = 1.414;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct StepReport {
    pub dt: f64,
    pub alpha: f64,
    pub mass_before: f64,
    pub mass_after: f64,
    /// `(mass_after − mass_before) / mass_before` before any renormalisation.
    pub drift: f64,
    pub renormalized: bool,
}

/// One row of the diagnostics trace.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DiagnosticRow {
    pub t: f64,
    pub mass: f64,
    pub h_c: f64,
    pub h_q: f64,
    pub h_cq: f64,
    pub total: f64,
    pub l1: Option<f64>,
}

#[derive(Debug, Clone)]
pub struct Evolution {
    pub state: HybridState,
    pub diagnostics: Vec<DiagnosticRow>,
    pub steps: usize,
    pub dt: f64,
    pub renormalizations: usize,
    /// Largest per-step relative mass drift seen before renormalisation.
    pub max_drift: f64,
    /// Sum of the signed per-step drifts, i.e. the mass change had no
    /// renormalisation been applied.
    pub cumulative_drift: f64,
}

/// Largest stable step for coupling rate `alpha`, including the CFL factor.
pub fn stable_dt(state: &HybridState, p: &PhysicalParams, alpha: f64, cfg: &SchemeConfig) -> f64 {
    let g = &state.grid;
    let (hx, hq) = (g.x.spacing(), g.q.spacing());
    let qmax = g.q.min().abs().max(g.q.max().abs());
    let mut vx = (alpha * qmax).abs();
    let mut vq: f64 = 0.0;
    let mut limit = f64::INFINITY;
    if cfg.scheme == Scheme::FullHybrid {
        let top = state.p.iter().cloned().fold(0.0, f64::max);
        let cut = top * ACTIVE_FRACTION;
        let sx = d1_2d(&state.s, g.shape(), hx, Axis::X);
        let sq = d1_2d(&state.s, g.shape(), hq, Axis::Q);
        let nq = g.q.len();
        let (ax, aq) = state
            .p
            .par_iter()
            .enumerate()
            .filter(|(_, v)| **v > cut)
            .map(|(k, _)| {
                let q = g.q.point(k % nq);
                (
                    (alpha * q + sx[k] / p.pointer_mass).abs(),
                    (sq[k] / p.quantum_mass).abs(),
                )
            })
            .reduce(|| (0.0, 0.0), |a, b| (a.0.max(b.0), a.1.max(b.1)));
        vx = vx.max(ax);
        vq = aq;
        if p.hbar > 0.0 {
            limit = DISPERSIVE_BOUND * p.quantum_mass * hq * hq / p.hbar;
        }
    }
    if vx > 0.0 {
        limit = limit.min(hx / vx);
    }
    if vq > 0.0 {
        limit = limit.min(hq / vq);
    }
    cfg.cfl * limit
}

fn axpy(y: &[f64], a: f64, x: &[f64]) -> Vec<f64> {
    y.par_iter().zip(x).map(|(yi, xi)| yi + a * xi).collect()
}

fn rk4<F>(f: &[f64], g: &[f64], dt: f64, rhs: F) -> (Vec<f64>, Vec<f64>)
where
    F: Fn(&[f64], &[f64]) -> (Vec<f64>, Vec<f64>),
{
    let (k1f, k1g) = rhs(f, g);
    let (k2f, k2g) = rhs(&axpy(f, 0.5 * dt, &k1f), &axpy(g, 0.5 * dt, &k1g));
    let (k3f, k3g) = rhs(&axpy(f, 0.5 * dt, &k2f), &axpy(g, 0.5 * dt, &k2g));
    let (k4f, k4g) = rhs(&axpy(f, dt, &k3f), &axpy(g, dt, &k3g));
    let combine = |y: &[f64], a: &[f64], b: &[f64], c: &[f64], d: &[f64]| -> Vec<f64> {
        (0..y.len())
            .into_par_iter()
            .map(|k| y[k] + dt / 6.0 * (a[k] + 2.0 * b[k] + 2.0 * c[k] + d[k]))
            .collect()
    };
    (
        combine(f, &k1f, &k2f, &k3f, &k4f),
        combine(g, &k1g, &k2g, &k3g, &k4g),
    )
}

fn filter_line(f: &mut [f64], strength: f64, scratch: &mut Vec<f64>) {
    let n = f.len();
    if n < 5 {
        return;
    }
    scratch.clear();
    scratch.extend_from_slice(f);
    let s = scratch;
    for i in 2..n - 2 {
        f[i] -= strength / 16.0
            * (s[i - 2] - 4.0 * s[i - 1] + 6.0 * s[i] - 4.0 * s[i + 1] + s[i + 2]);
    }
    f[1] += strength / 4.0 * (s[0] - 2.0 * s[1] + s[2]);
    f[n - 2] += strength / 4.0 * (s[n - 1] - 2.0 * s[n - 2] + s[n - 3]);
}

/// Fourth-difference low-pass filter along both axes.
fn filter_2d(f: &mut [f64], (nx, nq): (usize, usize), strength: f64) {
    f.par_chunks_mut(nq).for_each_init(Vec::new, |scratch, row| {
        filter_line(row, strength, scratch)
    });
    let mut cols: Vec<f64> = vec![0.0; f.len()];
    for i in 0..nx {
        for j in 0..nq {
            cols[j * nx + i] = f[i * nq + j];
        }
    }
    cols.par_chunks_mut(nx).for_each_init(Vec::new, |scratch, col| {
        filter_line(col, strength, scratch)
    });
    for i in 0..nx {
        for j in 0..nq {
            f[i * nq + j] = cols[j * nx + i];
        }
    }
}

pub fn step(
    state: &HybridState,
    p: &PhysicalParams,
    profile: &AlphaProfile,
    cfg: &SchemeConfig,
) -> Result<HybridState> {
    step_with_report(state, p, profile, cfg, None).map(|(s, _)| s)
}

/// Advances `state` by `cfg.dt` with explicit RK4.
///
/// The coupling rate is held at its mean over the step, which makes the
/// integrated strength exact for piecewise-constant profiles. An optional
/// external potential `v` sampled on the state grid enters the phase equation.
pub fn step_with_report(
    state: &HybridState,
    p: &PhysicalParams,
    profile: &AlphaProfile,
    cfg: &SchemeConfig,
    v: Option<&[f64]>,
) -> Result<(HybridState, StepReport)> {
    cfg.validate()?;
    let dt = cfg.dt;
    let t0 = state.t;
    let alpha = profile.mean_rate(t0, t0 + dt);
    let limit = stable_dt(state, p, alpha, cfg);
    if dt > limit * (1.0 + 1e-9) {
        return Err(Error::CflViolation { dt, limit });
    }
    let op = Operator::new(&state.grid, p, cfg.flux, v)?;
    let mass_before = state.mass();
    let shape = state.grid.shape();

    let (mut p_new, s_new) = match cfg.scheme {
        Scheme::InteractionAdvection => {
            let (mut pn, sn) = rk4(&state.p, &state.s, dt, |a, b| op.advection(a, b, alpha));
            pn.par_iter_mut().for_each(|x| *x = x.max(0.0));
            (pn, sn)
        }
        Scheme::FullHybrid => {
            let u0 = log_density(&state.p);
            let (mut u, mut s) = rk4(&u0, &state.s, dt, |a, b| op.log_form(a, b, alpha));
            if p.hbar > 0.0 && cfg.filter > 0.0 {
                filter_2d(&mut u, shape, cfg.filter);
                filter_2d(&mut s, shape, cfg.filter);
            }
            (u.par_iter().map(|x| x.exp()).collect(), s)
        }
    };
    if p_new.iter().any(|x| !x.is_finite()) {
        return Err(Error::NonFiniteField("P"));
    }
    if s_new.iter().any(|x| !x.is_finite()) {
        return Err(Error::NonFiniteField("S"));
    }

    let mut next = HybridState::new(state.grid, std::mem::take(&mut p_new), s_new, t0 + dt)?;
    let mass_after = next.mass();
    let drift = if mass_before > 0.0 {
        (mass_after - mass_before) / mass_before
    } else {
        0.0
    };
    let renormalized = drift.abs() > RENORMALIZE_THRESHOLD && mass_after > 0.0;
    if renormalized {
        let scale = mass_before / mass_after;
        next.p.par_iter_mut().for_each(|x| *x *= scale);
        log::debug!("t = {:.6e}: renormalised P, relative drift {drift:.3e}", next.t);
    }
    Ok((
        next,
        StepReport {
            dt,
            alpha,
            mass_before,
            mass_after,
            drift,
            renormalized,
        },
    ))
}

fn diagnostic(
    state: &HybridState,
    p: &PhysicalParams,
    profile: &AlphaProfile,
    reference: Option<&dyn Fn(f64) -> Result<Vec<f64>>>,
) -> Result<DiagnosticRow> {
    let e = ensemble_energy(state, p, profile.rate_at(state.t))?;
    let l1 = match reference {
        Some(f) => Some(l1_distance_2d(&state.p, &f(state.t)?, &state.grid)?),
        None => None,
    };
    Ok(DiagnosticRow {
        t: state.t,
        mass: state.mass(),
        h_c: e.h_c,
        h_q: e.h_q,
        h_cq: e.h_cq,
        total: e.total,
        l1,
    })
}

pub fn evolve(
    state: &HybridState,
    p: &PhysicalParams,
    profile: &AlphaProfile,
    t_end: f64,
    cfg: &SchemeConfig,
) -> Result<Evolution> {
    run(state, p, profile, t_end, cfg, None)
}

/// As [`evolve`], adding the L1 distance to `reference(t)` to every
/// diagnostics row.
pub fn evolve_with_reference(
    state: &HybridState,
    p: &PhysicalParams,
    profile: &AlphaProfile,
    t_end: f64,
    cfg: &SchemeConfig,
    reference: &dyn Fn(f64) -> Result<Vec<f64>>,
) -> Result<Evolution> {
    run(state, p, profile, t_end, cfg, Some(reference))
}

/// Steps of equal length `(t_end − t)/n`, with `n` the smallest count
/// for which the step does not exceed `cfg.dt`.
fn run(
    state: &HybridState,
    p: &PhysicalParams,
    profile: &AlphaProfile,
    t_end: f64,
    cfg: &SchemeConfig,
    reference: Option<&dyn Fn(f64) -> Result<Vec<f64>>>,
) -> Result<Evolution> {
    cfg.validate()?;
    let span = t_end - state.t;
    if !(span >= 0.0) {
        return Err(Error::InvalidConfig(format!(
            "t_end = {t_end} precedes the state time {}",
            state.t
        )));
    }
    let steps = if span == 0.0 {
        0
    } else {
        ((span / cfg.dt) * (1.0 - 1e-12)).ceil().max(1.0) as usize
    };
    let dt = if steps == 0 { 0.0 } else { span / steps as f64 };
    let stepped = SchemeConfig { dt, ..*cfg };

    let mut current = state.clone();
    let mut diagnostics = vec![diagnostic(&current, p, profile, reference)?];
    let mut renormalizations = 0;
    let mut max_drift: f64 = 0.0;
    let mut cumulative_drift = 0.0;
    for n in 1..=steps {
        let (mut next, report) = step_with_report(&current, p, profile, &stepped, None)?;
        if n == steps {
            next.t = t_end;
        }
        renormalizations += report.renormalized as usize;
        max_drift = max_drift.max(report.drift.abs());
        cumulative_drift += report.drift;
        current = next;
        if n % cfg.stride == 0 || n == steps {
            diagnostics.push(diagnostic(&current, p, profile, reference)?);
        }
    }
    Ok(Evolution {
        state: current,
        diagnostics,
        steps,
        dt,
        renormalizations,
        max_drift,
        cumulative_drift,
    })
}

/// Trapezoid marginals over `q` and over `x`, each scaled to unit mass.
pub fn marginals(state: &HybridState) -> Result<(Vec<f64>, Vec<f64>)> {
    let g = &state.grid;
    g.check_len(state.p.len())?;
    let mut px = marginal_x(&state.p, g)?;
    let mut pq = marginal_q(&state.p, g)?;
    let mx = integrate_1d(&px, &g.x)?;
    let mq = integrate_1d(&pq, &g.q)?;
    if !(mx > 0.0 && mq > 0.0) {
        return Err(Error::InvalidConfig("state has zero mass".into()));
    }
    px.iter_mut().for_each(|v| *v /= mx);
    pq.iter_mut().for_each(|v| *v /= mq);
    Ok((px, pq))
}
