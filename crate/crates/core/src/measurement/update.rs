use serde::{Deserialize, Serialize};

use super::mixture::PointerState;
use crate::analytic::{initial_quantum_density, narrow_ratio};
use crate::error::{Error, Result};
use crate::grid::Grid1D;
use crate::mixture::{GaussianComponent, GaussianMixture1D};
use crate::params::PhysicalParams;

/// A pointer reading `x_m` taken at `t_m` with readout noise `sigma_m`
/// (zero for an ideal readout).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MeasurementRecord {
    pub t_m: f64,
    pub x_m: f64,
    pub sigma_m: f64,
}

impl MeasurementRecord {
    pub fn ideal(t_m: f64, x_m: f64) -> Self {
        Self {
            t_m,
            x_m,
            sigma_m: 0.0,
        }
    }

    pub fn validate(&self, p: &PhysicalParams) -> Result<()> {
        if !(self.t_m.is_finite() && self.x_m.is_finite() && self.sigma_m.is_finite()) {
            return Err(Error::InvalidRecord(format!("non-finite field in {self:?}")));
        }
        if self.t_m <= p.epsilon {
            return Err(Error::InvalidRecord(format!(
                "t_m = {} must follow the interaction end {}",
                self.t_m, p.epsilon
            )));
        }
        if self.sigma_m < 0.0 {
            return Err(Error::InvalidRecord(format!(
                "sigma_m = {} must be >= 0",
                self.sigma_m
            )));
        }
        Ok(())
    }
}

/// Pointer part of a posterior.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "kind")]
pub enum PointerPosterior {
    /// One selected element.
    Element(PointerState),
    /// A noisy readout keeps a weighted range of elements.
    Range {
        labels: GaussianMixture1D,
        lambda: f64,
        mass: f64,
        t: f64,
    },
}

/// State after a readout. The quantum part is a law over `q` alone and the
/// pointer part refers only to labels; the only trace of the readout is the
/// stored record.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Posterior {
    pub pointer: PointerPosterior,
    pub quantum: GaussianMixture1D,
    pub independent: bool,
    pub record: MeasurementRecord,
}

impl Posterior {
    pub fn density_on(&self, grid: &Grid1D) -> Vec<f64> {
        self.quantum.sample_on(grid)
    }
}

/// Ideal readout: the quantum posterior is `N(x_m/λt_m, σ_C/|λ|t_m)`,
/// independent of the prepared width `σ_Q`. Records with `sigma_m > 0` are
/// passed to [`update_quantum_noisy`].
pub fn update_quantum(rec: &MeasurementRecord, p: &PhysicalParams) -> Result<Posterior> {
    rec.validate(p)?;
    if rec.sigma_m > 0.0 {
        return update_quantum_noisy(rec, p);
    }
    let ratio = narrow_ratio(p, rec.t_m);
    if ratio >= 0.1 {
        log::warn!("ideal posterior outside the narrow-pointer regime (ratio {ratio:.3})");
    }
    let k = p.lambda * rec.t_m;
    let q_m = rec.x_m / k;
    let quantum = GaussianMixture1D::single(q_m, p.sigma_c / k.abs())?;
    Ok(Posterior {
        pointer: PointerPosterior::Element(PointerState {
            label: q_m,
            lambda: p.lambda,
            mass: p.pointer_mass,
            t: rec.t_m,
        }),
        quantum,
        independent: true,
        record: *rec,
    })
}

/// Conjugate update of the two-packet prior with the likelihood
/// `N(x_m; λ q t_m, σ_m² + σ_C²)`.
pub fn update_quantum_noisy(rec: &MeasurementRecord, p: &PhysicalParams) -> Result<Posterior> {
    rec.validate(p)?;
    if !(rec.sigma_m > 0.0) {
        return Err(Error::InvalidRecord("noisy update needs sigma_m > 0".into()));
    }
    let a = p.lambda * rec.t_m;
    let s2 = rec.sigma_m * rec.sigma_m + p.sigma_c * p.sigma_c;
    let centre = rec.x_m / a;
    let prior = initial_quantum_density(p);

    let parts: Vec<(f64, f64, f64)> = prior
        .components()
        .iter()
        .map(|c| {
            let v = c.sigma * c.sigma;
            let eta = 1.0 / v + a * a / s2;
            let mean = (c.mean / v + rec.x_m * a / s2) / eta;
            // Evidence of this component, in logs.
            let spread = v + s2 / (a * a);
            let log_w = c.weight.ln()
                - 0.5 * (centre - c.mean).powi(2) / spread
                - 0.5 * spread.ln();
            (log_w, mean, eta.recip().sqrt())
        })
        .collect();
    let top = parts.iter().map(|x| x.0).fold(f64::NEG_INFINITY, f64::max);
    let comps: Vec<GaussianComponent> = parts
        .iter()
        .map(|(lw, mean, sigma)| GaussianComponent {
            weight: (lw - top).exp(),
            mean: *mean,
            sigma: *sigma,
        })
        .filter(|c| c.weight > 0.0)
        .collect();
    let quantum = GaussianMixture1D::normalized(comps)?;
    Ok(Posterior {
        pointer: PointerPosterior::Range {
            labels: quantum.clone(),
            lambda: p.lambda,
            mass: p.pointer_mass,
            t: rec.t_m,
        },
        quantum,
        independent: true,
        record: *rec,
    })
}
