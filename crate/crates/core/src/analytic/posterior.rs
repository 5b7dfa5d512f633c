use crate::error::{Error, Result};
use crate::mixture::GaussianMixture1D;
use crate::params::PhysicalParams;

/// `σ_C / (σ_Q·|λ|·t)`: small values mean the pointer resolves single labels.
pub fn narrow_ratio(p: &PhysicalParams, t: f64) -> f64 {
    p.sigma_c / (p.sigma_q * p.lambda.abs() * t)
}

/// Warns when the ratio reaches 0.1 and rejects it at 1 or above.
pub fn check_narrow_regime(p: &PhysicalParams, t: f64) -> Result<f64> {
    let ratio = narrow_ratio(p, t);
    if !(ratio < 1.0) {
        return Err(Error::RegimeViolation { ratio });
    }
    if ratio >= 0.1 {
        log::warn!("pointer only marginally narrow: sigma_C / (sigma_Q lambda t) = {ratio:.3}");
    }
    Ok(ratio)
}

/// Quantum density conditioned on the pointer reading `x` at time `t`, in
/// the narrow-pointer limit: mean `x/λt`, width `σ_C/|λ|t`.
pub fn conditional_quantum_posterior(
    p: &PhysicalParams,
    x: f64,
    t: f64,
) -> Result<GaussianMixture1D> {
    if t.is_nan() || t <= p.epsilon {
        return Err(Error::TimeBeforeInteractionEnd {
            t,
            epsilon: p.epsilon,
        });
    }
    check_narrow_regime(p, t)?;
    let k = p.lambda * t;
    GaussianMixture1D::single(x / k, p.sigma_c / k.abs())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analytic::{initial_joint, pointer_marginal_exact, shifted_joint};
    use crate::grid::Grid1D;
    use crate::quadrature::{integrate_1d, l1_distance_1d};

    #[test]
    fn zero_reading_centres_posterior() {
        let post = conditional_quantum_posterior(&PhysicalParams::DESK, 0.0, 2.0).unwrap();
        assert_eq!(post.mean(), 0.0);
    }

    #[test]
    fn substitution_example() {
        let post = conditional_quantum_posterior(&PhysicalParams::DESK, 2.0, 2.0).unwrap();
        let c = post.components()[0];
        assert_eq!(c.mean, 1.0);
        assert_eq!(c.sigma, 0.025);
        let g = post.default_grid(2001).unwrap();
        assert!((integrate_1d(&post.sample_on(&g), &g).unwrap() - 1.0).abs() < 1e-10);
    }

    #[test]
    fn wide_pointer_rejected() {
        let p = PhysicalParams {
            sigma_c: 0.5,
            ..PhysicalParams::DESK
        };
        assert!(matches!(
            conditional_quantum_posterior(&p, 1.0, 2.0),
            Err(Error::RegimeViolation { .. })
        ));
    }

    fn bayes_l1(p: &PhysicalParams, x: f64, t: f64) -> f64 {
        let k = p.lambda * t;
        let j = shifted_joint(&initial_joint(p), k);
        let marginal = pointer_marginal_exact(p, k).pdf(x);
        let post = conditional_quantum_posterior(p, x, t).unwrap();
        let c = post.components()[0];
        let g = Grid1D::centered(c.mean, 12.0 * c.sigma, 4001).unwrap();
        let bayes = g.sample(|q| j.density(x, q) / marginal);
        l1_distance_1d(&bayes, &post.sample_on(&g), &g).unwrap()
    }

    #[test]
    fn bayes_ratio_agrees_in_narrow_regime() {
        let p = PhysicalParams {
            sigma_c: 1e-5,
            ..PhysicalParams::DESK
        };
        for x in [2.0, 1.9, -2.15] {
            let l1 = bayes_l1(&p, x, 2.0);
            assert!(l1 < 1e-3, "x={x}: {l1}");
        }
    }

    #[test]
    fn bayes_ratio_at_desk_width_is_not_narrow() {
        // σ_C/(σ_Q λ t) = 0.25 here, so the prior visibly sharpens the posterior.
        let l1 = bayes_l1(&PhysicalParams::DESK, 2.0, 2.0);
        assert!(l1 > 1e-3 && l1 < 0.1, "{l1}");
    }
}
