//! Weighted sums of 1-D Gaussians.

use std::f64::consts::{PI, SQRT_2};

use rand::Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::Grid1D;

const WEIGHT_SUM_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GaussianComponent {
    pub weight: f64,
    pub mean: f64,
    pub sigma: f64,
}

impl GaussianComponent {
    pub fn pdf(&self, x: f64) -> f64 {
        normal_pdf(x, self.mean, self.sigma)
    }

    pub fn cdf(&self, x: f64) -> f64 {
        normal_cdf(x, self.mean, self.sigma)
    }
}

pub fn normal_pdf(x: f64, mean: f64, sigma: f64) -> f64 {
    let z = (x - mean) / sigma;
    (-0.5 * z * z).exp() / ((2.0 * PI).sqrt() * sigma)
}

pub fn normal_cdf(x: f64, mean: f64, sigma: f64) -> f64 {
    0.5 * libm::erfc(-(x - mean) / (sigma * SQRT_2))
}

/// A normalised Gaussian mixture. Serialises as a list of
/// `{weight, mean, sigma}` objects.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<GaussianComponent>", into = "Vec<GaussianComponent>")]
pub struct GaussianMixture1D {
    components: Vec<GaussianComponent>,
}

impl TryFrom<Vec<GaussianComponent>> for GaussianMixture1D {
    type Error = Error;
    fn try_from(c: Vec<GaussianComponent>) -> Result<Self> {
        Self::new(c)
    }
}

impl From<GaussianMixture1D> for Vec<GaussianComponent> {
    fn from(m: GaussianMixture1D) -> Self {
        m.components
    }
}

impl GaussianMixture1D {
    /// Checks that weights are positive and sum to one and that widths are positive.
    pub fn new(components: Vec<GaussianComponent>) -> Result<Self> {
        if components.is_empty() {
            return Err(Error::InvalidMixture("no components".into()));
        }
        for c in &components {
            if !(c.weight.is_finite() && c.mean.is_finite() && c.sigma.is_finite()) {
                return Err(Error::InvalidMixture(format!("non-finite component {c:?}")));
            }
            if c.weight <= 0.0 {
                return Err(Error::InvalidMixture(format!("weight {} must be > 0", c.weight)));
            }
            if c.sigma <= 0.0 {
                return Err(Error::InvalidMixture(format!("sigma {} must be > 0", c.sigma)));
            }
        }
        let total: f64 = components.iter().map(|c| c.weight).sum();
        if (total - 1.0).abs() > WEIGHT_SUM_TOL {
            return Err(Error::InvalidMixture(format!("weights sum to {total}")));
        }
        Ok(Self { components })
    }

    /// Like [`new`](Self::new) but rescales positive weights to sum to one.
    pub fn normalized(mut components: Vec<GaussianComponent>) -> Result<Self> {
        let total: f64 = components.iter().map(|c| c.weight).sum();
        if !(total > 0.0 && total.is_finite()) {
            return Err(Error::InvalidMixture(format!("weights sum to {total}")));
        }
        for c in &mut components {
            c.weight /= total;
        }
        Self::new(components)
    }

    pub fn single(mean: f64, sigma: f64) -> Result<Self> {
        Self::new(vec![GaussianComponent {
            weight: 1.0,
            mean,
            sigma,
        }])
    }

    /// Equal-weight pair at `±offset` sharing one width.
    pub fn symmetric_pair(offset: f64, sigma: f64) -> Result<Self> {
        Self::new(vec![
            GaussianComponent {
                weight: 0.5,
                mean: -offset,
                sigma,
            },
            GaussianComponent {
                weight: 0.5,
                mean: offset,
                sigma,
            },
        ])
    }

    pub fn components(&self) -> &[GaussianComponent] {
        &self.components
    }

    pub fn pdf(&self, x: f64) -> f64 {
        self.components.iter().map(|c| c.weight * c.pdf(x)).sum()
    }

    pub fn cdf(&self, x: f64) -> f64 {
        self.components.iter().map(|c| c.weight * c.cdf(x)).sum()
    }

    pub fn mean(&self) -> f64 {
        self.components.iter().map(|c| c.weight * c.mean).sum()
    }

    pub fn variance(&self) -> f64 {
        let mu = self.mean();
        self.components
            .iter()
            .map(|c| c.weight * (c.sigma * c.sigma + (c.mean - mu).powi(2)))
            .sum()
    }

    /// `E|X|`, from the folded-normal mean of each component.
    pub fn mean_abs(&self) -> f64 {
        self.components
            .iter()
            .map(|c| {
                let (m, s) = (c.mean, c.sigma);
                let folded = s * (2.0 / PI).sqrt() * (-m * m / (2.0 * s * s)).exp()
                    + m * (1.0 - 2.0 * normal_cdf(-m / s, 0.0, 1.0));
                c.weight * folded
            })
            .sum()
    }

    /// Affine image `a·X + b` of the mixture. `a` must be non-zero.
    pub fn affine(&self, a: f64, b: f64) -> Result<Self> {
        if a == 0.0 || !a.is_finite() {
            return Err(Error::InvalidMixture(format!("scale {a} must be finite and non-zero")));
        }
        Self::new(
            self.components
                .iter()
                .map(|c| GaussianComponent {
                    weight: c.weight,
                    mean: a * c.mean + b,
                    sigma: a.abs() * c.sigma,
                })
                .collect(),
        )
    }

    /// First and second derivative of `ln pdf` at `x`, evaluated stably
    /// through component responsibilities.
    pub fn log_derivatives(&self, x: f64) -> (f64, f64) {
        let logs: Vec<f64> = self
            .components
            .iter()
            .map(|c| {
                let z = (x - c.mean) / c.sigma;
                c.weight.ln() - c.sigma.ln() - 0.5 * z * z
            })
            .collect();
        let top = logs.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let r: Vec<f64> = logs.iter().map(|l| (l - top).exp()).collect();
        let total: f64 = r.iter().sum();
        let (mut g, mut gg) = (0.0, 0.0);
        for (c, ri) in self.components.iter().zip(&r) {
            let w = ri / total;
            let a1 = -(x - c.mean) / (c.sigma * c.sigma);
            let a2 = -1.0 / (c.sigma * c.sigma);
            g += w * a1;
            gg += w * (a1 * a1 + a2);
        }
        (g, gg - g * g)
    }

    /// `ln pdf(x)` without underflow in the tails.
    pub fn ln_pdf(&self, x: f64) -> f64 {
        let logs: Vec<f64> = self
            .components
            .iter()
            .map(|c| {
                let z = (x - c.mean) / c.sigma;
                c.weight.ln() - c.sigma.ln() - 0.5 * z * z - 0.5 * (2.0 * PI).ln()
            })
            .collect();
        let top = logs.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        top + logs.iter().map(|l| (l - top).exp()).sum::<f64>().ln()
    }

    /// Lower and upper bound of `mean ± k·sigma` over all components.
    pub fn support(&self, k: f64) -> (f64, f64) {
        let lo = self
            .components
            .iter()
            .map(|c| c.mean - k * c.sigma)
            .fold(f64::INFINITY, f64::min);
        let hi = self
            .components
            .iter()
            .map(|c| c.mean + k * c.sigma)
            .fold(f64::NEG_INFINITY, f64::max);
        (lo, hi)
    }

    pub fn max_sigma(&self) -> f64 {
        self.components.iter().map(|c| c.sigma).fold(0.0, f64::max)
    }

    /// Inverse of the CDF by bisection on an erf-based CDF.
    ///
    /// `u` is clamped into the open unit interval.
    pub fn inverse_cdf(&self, u: f64) -> f64 {
        let u = u.clamp(f64::MIN_POSITIVE, 1.0 - f64::EPSILON);
        let (mut lo, mut hi) = self.support(40.0);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if self.cdf(mid) < u {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        0.5 * (lo + hi)
    }

    /// Draws by picking a component and then a normal deviate.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        let mut u: f64 = rng.random();
        let mut chosen = self.components.last().expect("non-empty");
        for c in &self.components {
            if u < c.weight {
                chosen = c;
                break;
            }
            u -= c.weight;
        }
        Normal::new(chosen.mean, chosen.sigma)
            .expect("validated sigma")
            .sample(rng)
    }

    pub fn sample_on(&self, grid: &Grid1D) -> Vec<f64> {
        grid.sample(|x| self.pdf(x))
    }

    /// Default evaluation grid covering `±8σ` of every component.
    pub fn default_grid(&self, n: usize) -> Result<Grid1D> {
        let (lo, hi) = self.support(8.0);
        Grid1D::new(lo, hi, n)
    }
}
