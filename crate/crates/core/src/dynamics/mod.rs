//! Grid integrator for the coupled continuity and modified Hamilton–Jacobi
//! equations of a hybrid pointer/particle ensemble.
//!
//! Two schemes are available. The interaction-advection scheme keeps only
//! the coupling term and advects `P` and `S` rigidly along `x` with speed
//! `α q`. The full-hybrid scheme keeps every term; it evolves `ln P` rather
//! than `P`, which keeps the quantum potential finite without a density
//! floor, and applies a weak high-order grid filter to suppress grid-scale
//! growth in the far tails.

mod potential;
mod residual;
mod rhs;
mod scheme;
mod stepper;

pub use potential::{quantum_potential, quantum_potential_clamped, DENSITY_FLOOR};
pub use residual::{residual_report, ResidualReport};
pub use rhs::hybrid_time_derivatives;
pub use scheme::{Flux, Scheme, SchemeConfig};
pub use stepper::{
    RENORMALIZE_THRESHOLD,
    evolve, evolve_with_reference, marginals, stable_dt, step, step_with_report, DiagnosticRow,
    Evolution, StepReport,
};
