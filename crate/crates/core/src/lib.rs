//! Simulation of a classical pointer measuring the position of a quantum
//! particle, with both systems described as ensembles on configuration
//! space.
//!
//! The crate is organised as
//!
//! * shared types: [`PhysicalParams`], [`Grid1D`]/[`Grid2D`], [`HybridState`],
//!   [`GaussianMixture1D`], [`AlphaProfile`] and trapezoid [`quadrature`];
//! * [`analytic`]: closed-form densities, actions and energy functionals;
//! * [`dynamics`]: a grid integrator for the coupled equations of motion;
//! * [`measurement`]: pointer mixtures, readout sampling and posterior updates;
//! * [`phase_space`]: classical mixtures as phase-space densities.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod alpha;
pub mod analytic;
pub mod diff;
pub mod dynamics;
pub mod error;
pub mod grid;
pub mod io;
pub mod measurement;
pub mod mixture;
pub mod params;
pub mod phase_space;
pub mod quadrature;
pub mod state;

pub use alpha::{AlphaProfile, AlphaSegment};
pub use error::{Error, Result};
pub use grid::{Grid1D, Grid2D};
pub use mixture::{GaussianComponent, GaussianMixture1D};
pub use params::{validate_params, ParamError, ParamViolation, PhysicalParams};
pub use quadrature::{integrate_1d, integrate_2d};
pub use state::HybridState;
