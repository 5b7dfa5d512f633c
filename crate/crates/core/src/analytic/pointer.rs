use crate::error::{Error, Result};
use crate::mixture::GaussianMixture1D;
use crate::params::PhysicalParams;

/// Which width a free-pointer density carries.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum PointerWidth {
    /// `σ_Q·λ·t`, valid when the initial pointer width is negligible.
    #[default]
    Narrow,
    /// `√(σ_C² + σ_Q²λ²t²)`.
    Full,
}

/// Pointer density after a shear by `k`: two halves at `±q0·k` with width
/// `√(σ_C² + σ_Q²k²)`.
pub fn pointer_marginal_exact(p: &PhysicalParams, k: f64) -> GaussianMixture1D {
    let sigma = (p.sigma_c * p.sigma_c + p.sigma_q * p.sigma_q * k * k).sqrt();
    GaussianMixture1D::symmetric_pair(p.q0 * k, sigma).expect("positive width")
}

/// The zero-width-pointer limit: the initial quantum density rescaled by `k`.
pub fn pointer_marginal_limit(p: &PhysicalParams, k: f64) -> Result<GaussianMixture1D> {
    if k == 0.0 {
        return Err(Error::ZeroK);
    }
    GaussianMixture1D::symmetric_pair(p.q0 * k, p.sigma_q * k.abs())
}

/// Pointer density at `t > ε` when each element moves with velocity `λq`.
pub fn free_pointer_density(
    p: &PhysicalParams,
    t: f64,
    width: PointerWidth,
) -> Result<GaussianMixture1D> {
    if t.is_nan() || t <= p.epsilon {
        return Err(Error::TimeBeforeInteractionEnd {
            t,
            epsilon: p.epsilon,
        });
    }
    let k = p.lambda * t;
    match width {
        PointerWidth::Full => Ok(pointer_marginal_exact(p, k)),
        PointerWidth::Narrow => {
            GaussianMixture1D::symmetric_pair(p.q0 * k, p.sigma_q * k.abs())
        }
    }
}
