//! Classical phase-space densities of free particles built from mixtures of
//! configuration-space ensembles, in two equivalent representations.
//!
//! The principal representation labels elements by their initial position
//! `x0` and spreads them in velocity with a profile `F(v)`:
//! `ρ = (1/m) P_x0(x − pt/m) F(p/m)`. The separated representation labels
//! elements by velocity and spreads them in position:
//! `ρ = (1/m) P_v(p/m) F(x − pt/m)`. Swapping the two functions maps one
//! form onto the other.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::Grid1D;
use crate::mixture::{normal_pdf, GaussianMixture1D};
use crate::params::PhysicalParams;

/// Width of the Gaussian standing in for a delta, in grid spacings.
pub const DELTA_WIDTH_SPACINGS: f64 = 2.0;

/// A normalised 1-D law used as a label density or element profile.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum Density1D {
    Gaussian { components: GaussianMixture1D },
    /// Point mass, realised as a Gaussian of width
    /// `DELTA_WIDTH_SPACINGS` grid spacings of the axis it is evaluated on.
    Delta { at: f64 },
}

impl Density1D {
    pub fn gaussian(mean: f64, sigma: f64) -> Result<Self> {
        Ok(Self::Gaussian {
            components: GaussianMixture1D::single(mean, sigma)?,
        })
    }

    /// Density at `v` on an axis with sample spacing `spacing`.
    pub fn pdf(&self, v: f64, spacing: f64) -> f64 {
        match self {
            Self::Gaussian { components } => components.pdf(v),
            Self::Delta { at } => normal_pdf(v, *at, DELTA_WIDTH_SPACINGS * spacing),
        }
    }

    fn validate(&self) -> Result<()> {
        match self {
            Self::Gaussian { .. } => Ok(()),
            Self::Delta { at } if at.is_finite() => Ok(()),
            Self::Delta { at } => Err(Error::InvalidMixture(format!("delta at {at}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Representation {
    /// Labels are initial positions; `label` is `P_x0`, `profile` is `F(v)`.
    Principal,
    /// Labels are velocities; `label` is `P_v`, `profile` is `F(x)`.
    Separated,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MixtureSpec {
    pub representation: Representation,
    pub label: Density1D,
    pub profile: Density1D,
    pub mass: f64,
}

impl MixtureSpec {
    pub fn validate(&self) -> Result<()> {
        if !(self.mass > 0.0 && self.mass.is_finite()) {
            return Err(Error::InvalidMixture(format!("mass {} must be > 0", self.mass)));
        }
        self.label.validate()?;
        self.profile.validate()
    }
}

/// Axes of a phase-space grid.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhaseGrid {
    pub x: Grid1D,
    pub p: Grid1D,
}

impl PhaseGrid {
    pub fn new(x: Grid1D, p: Grid1D) -> Self {
        Self { x, p }
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.x.len(), self.p.len())
    }

    pub fn len(&self) -> usize {
        self.x.len() * self.p.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// `ρ(x, p, t)` stored row-major with `x` outer.
#[derive(Debug, Clone, PartialEq)]
pub struct PhaseDensity {
    pub grid: PhaseGrid,
    pub rho: Vec<f64>,
    pub t: f64,
}

fn trapz(f: &[f64], g: &Grid1D) -> f64 {
    crate::quadrature::integrate_1d(f, g).expect("lengths match")
}

impl PhaseDensity {
    /// `∫ ρ dp` on the `x` axis.
    pub fn marginal_x(&self) -> Vec<f64> {
        let np = self.grid.p.len();
        self.rho
            .par_chunks(np)
            .map(|row| trapz(row, &self.grid.p))
            .collect()
    }

    /// `∫ ρ dx` on the `p` axis.
    pub fn marginal_p(&self) -> Vec<f64> {
        let (nx, np) = self.grid.shape();
        (0..np)
            .into_par_iter()
            .map(|j| {
                let col: Vec<f64> = (0..nx).map(|i| self.rho[i * np + j]).collect();
                trapz(&col, &self.grid.x)
            })
            .collect()
    }

    pub fn mass(&self) -> f64 {
        trapz(&self.marginal_x(), &self.grid.x)
    }

    pub fn max_abs_diff(&self, other: &PhaseDensity) -> Result<f64> {
        if self.grid != other.grid {
            return Err(Error::InvalidGrid("phase densities on different grids".into()));
        }
        Ok(self
            .rho
            .par_iter()
            .zip(&other.rho)
            .map(|(a, b)| (a - b).abs())
            .reduce(|| 0.0, f64::max))
    }
}

fn evaluate(
    grid: &PhaseGrid,
    t: f64,
    f: impl Fn(f64, f64) -> f64 + Sync,
) -> PhaseDensity {
    let np = grid.p.len();
    let mut rho = vec![0.0; grid.len()];
    rho.par_chunks_mut(np).enumerate().for_each(|(i, row)| {
        let x = grid.x.point(i);
        for (j, r) in row.iter_mut().enumerate() {
            *r = f(x, grid.p.point(j));
        }
    });
    PhaseDensity {
        grid: *grid,
        rho,
        t,
    }
}

fn expect(spec: &MixtureSpec, rep: Representation) -> Result<()> {
    spec.validate()?;
    if spec.representation != rep {
        return Err(Error::InvalidMixture(format!(
            "expected a {rep:?} spec, got {:?}",
            spec.representation
        )));
    }
    Ok(())
}

/// `ρ = (1/m) P_x0(x − pt/m) F(p/m)`, for `t > 0`.
pub fn principal_density(spec: &MixtureSpec, grid: &PhaseGrid, t: f64) -> Result<PhaseDensity> {
    expect(spec, Representation::Principal)?;
    if t.is_nan() || t < 0.0 {
        return Err(Error::NegativeTime(t));
    }
    if t == 0.0 {
        return Err(Error::ZeroTime);
    }
    let m = spec.mass;
    let (hx, hv) = (grid.x.spacing(), grid.p.spacing() / m);
    Ok(evaluate(grid, t, |x, p| {
        spec.label.pdf(x - p * t / m, hx) * spec.profile.pdf(p / m, hv) / m
    }))
}

/// `ρ = (1/m) P_v(p/m) F(x − pt/m)`.
pub fn separated_density(spec: &MixtureSpec, grid: &PhaseGrid, t: f64) -> Result<PhaseDensity> {
    expect(spec, Representation::Separated)?;
    if t.is_nan() || t < 0.0 {
        return Err(Error::NegativeTime(t));
    }
    let m = spec.mass;
    let (hx, hv) = (grid.x.spacing(), grid.p.spacing() / m);
    Ok(evaluate(grid, t, |x, p| {
        spec.profile.pdf(x - p * t / m, hx) * spec.label.pdf(p / m, hv) / m
    }))
}

/// Swaps label density and profile and flips the representation tag.
pub fn equivalence_transform(spec: &MixtureSpec) -> MixtureSpec {
    MixtureSpec {
        representation: match spec.representation {
            Representation::Principal => Representation::Separated,
            Representation::Separated => Representation::Principal,
        },
        label: spec.profile.clone(),
        profile: spec.label.clone(),
        mass: spec.mass,
    }
}

/// Evaluates a spec in whichever representation it carries.
pub fn density(spec: &MixtureSpec, grid: &PhaseGrid, t: f64) -> Result<PhaseDensity> {
    match spec.representation {
        Representation::Principal => principal_density(spec, grid, t),
        Representation::Separated => separated_density(spec, grid, t),
    }
}

/// The post-interaction pointer as a velocity mixture: labels `v = λq` with
/// `q` drawn from the initial quantum density, each element spread like the
/// initial pointer.
pub fn pointer_velocity_mixture(p: &PhysicalParams) -> Result<MixtureSpec> {
    let labels = crate::analytic::initial_quantum_density(p).affine(p.lambda, 0.0)?;
    Ok(MixtureSpec {
        representation: Representation::Separated,
        label: Density1D::Gaussian { components: labels },
        profile: Density1D::gaussian(0.0, p.sigma_c)?,
        mass: p.pointer_mass,
    })
}

/// Momentum axis matching the label grid of `n` points on `q`, scaled by
/// `λ` into velocity and by `M` into momentum.
pub fn pointer_momentum_grid(p: &PhysicalParams, n: usize) -> Result<Grid1D> {
    let q = crate::analytic::initial_quantum_density(p).default_grid(n)?;
    let s = p.lambda * p.pointer_mass;
    let (a, b) = (s * q.min(), s * q.max());
    Grid1D::new(a.min(b), a.max(b), n)
}
