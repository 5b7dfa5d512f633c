//! Closed-form Gaussian solutions: the shifted joint density, pointer
//! marginals, classical actions, posteriors, the freely spreading quantum
//! state and the ensemble energy functionals.

mod action;
mod energy;
mod free;
mod joint;
mod pointer;
mod posterior;

pub use action::{
    element_action, pointer_action_global, ClassicalAction, ElementAction, GlobalAction,
};
pub use energy::{
    classical_energy_1d, ensemble_energy, local_energy_1d, local_energy_integral,
    momentum_density, translate_first_order, EnergyBreakdown,
};
pub use free::{free_width, free_quantum_state, QuantumFreeState};
pub use joint::{default_grid, initial_joint, shifted_joint, JointAnalytic};
pub use pointer::{
    free_pointer_density, pointer_marginal_exact, pointer_marginal_limit, PointerWidth,
};
pub use posterior::{check_narrow_regime, conditional_quantum_posterior, narrow_ratio};

use crate::alpha::AlphaProfile;
use crate::error::Result;
use crate::mixture::GaussianMixture1D;
use crate::params::PhysicalParams;

/// `k(t) = ∫₀ᵗ α`.
pub fn integrated_strength(profile: &AlphaProfile, t: f64) -> Result<f64> {
    profile.integrated_strength(t)
}

/// Two packets of width `σ_Q` at `±q0`, equal weights.
pub fn initial_quantum_density(p: &PhysicalParams) -> GaussianMixture1D {
    GaussianMixture1D::symmetric_pair(p.q0, p.sigma_q).expect("validated params")
}

/// Pointer at rest, centred at the origin with width `σ_C`.
pub fn initial_pointer_density(p: &PhysicalParams) -> GaussianMixture1D {
    GaussianMixture1D::single(0.0, p.sigma_c).expect("validated params")
}
