use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::analytic::{check_narrow_regime, initial_quantum_density, ElementAction};
use crate::error::{Error, Result};
use crate::grid::Grid1D;
use crate::mixture::GaussianMixture1D;
use crate::params::PhysicalParams;
use crate::quadrature::integrate_1d;

/// Label points used by [`decompose_pointer_mixture`].
pub const LABEL_POINTS: usize = 2001;

/// The pointer ensemble after the interaction, written as a weighted family
/// of trajectories `x(t) = λ q t` indexed by the label `q`.
#[derive(Debug, Clone, PartialEq)]
pub struct PointerMixture {
    labels: Grid1D,
    weights: Vec<f64>,
    prior: Option<GaussianMixture1D>,
    lambda: f64,
    mass: f64,
    t: f64,
}

impl PointerMixture {
    /// Mixture with tabulated label weights, normalised by the trapezoid rule.
    pub fn from_weights(
        labels: Grid1D,
        weights: Vec<f64>,
        p: &PhysicalParams,
        t: f64,
    ) -> Result<Self> {
        labels.check_len(weights.len())?;
        if weights.iter().any(|w| !w.is_finite() || *w < 0.0) {
            return Err(Error::InvalidMixture(
                "label weights must be finite and non-negative".into(),
            ));
        }
        let total = integrate_1d(&weights, &labels)?;
        if !(total > 0.0) {
            return Err(Error::DegenerateWeights);
        }
        Ok(Self {
            labels,
            weights: weights.iter().map(|w| w / total).collect(),
            prior: None,
            lambda: p.lambda,
            mass: p.pointer_mass,
            t,
        })
    }

    pub fn labels(&self) -> &Grid1D {
        &self.labels
    }

    /// Weight density on the label grid.
    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Closed-form weight law, when the mixture was built from one.
    pub fn prior(&self) -> Option<&GaussianMixture1D> {
        self.prior.as_ref()
    }

    pub fn t(&self) -> f64 {
        self.t
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn position(&self, q: f64, t: f64) -> f64 {
        self.lambda * q * t
    }

    pub fn element_action(&self, q: f64) -> ElementAction {
        ElementAction {
            q,
            lambda: self.lambda,
            mass: self.mass,
        }
    }

    fn weight_at(&self, q: f64) -> f64 {
        if let Some(prior) = &self.prior {
            return prior.pdf(q);
        }
        if !self.labels.contains(q) {
            return 0.0;
        }
        let h = self.labels.spacing();
        let s = (q - self.labels.min()) / h;
        let i = (s.floor() as usize).min(self.labels.len() - 2);
        let f = s - i as f64;
        self.weights[i] * (1.0 - f) + self.weights[i + 1] * f
    }

    /// `∫ dq w(q) δ(x − λ q t)`, i.e. `w(x/λt) / |λt|`.
    pub fn marginal_density(&self, x: f64) -> f64 {
        let k = self.lambda * self.t;
        self.weight_at(x / k) / k.abs()
    }

    /// Mixture mean of the element speeds `|λ q|`.
    pub fn mean_speed(&self) -> f64 {
        if let Some(prior) = &self.prior {
            return self.lambda.abs() * prior.mean_abs();
        }
        let f: Vec<f64> = self
            .labels
            .points()
            .iter()
            .zip(&self.weights)
            .map(|(q, w)| q.abs() * w)
            .collect();
        self.lambda.abs() * integrate_1d(&f, &self.labels).expect("lengths match")
    }

    fn draw_label<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        let u: f64 = rng.random();
        if let Some(prior) = &self.prior {
            return prior
                .inverse_cdf(u)
                .clamp(self.labels.min(), self.labels.max());
        }
        // Node masses of the trapezoid rule.
        let n = self.labels.len();
        let h = self.labels.spacing();
        let mut acc = 0.0;
        for (i, w) in self.weights.iter().enumerate() {
            let end = if i == 0 || i == n - 1 { 0.5 } else { 1.0 };
            acc += w * h * end;
            if u < acc {
                return self.labels.point(i);
            }
        }
        let last = self.weights.iter().rposition(|w| *w > 0.0).unwrap_or(n - 1);
        self.labels.point(last)
    }

    /// `n` labels drawn from the weight law with a generator seeded by `seed`.
    pub fn sample_labels(&self, n: usize, seed: u64) -> Vec<f64> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..n).map(|_| self.draw_label(&mut rng)).collect()
    }
}

/// Splits the free pointer ensemble at time `t` into trajectory elements
/// weighted by the initial quantum density.
pub fn decompose_pointer_mixture(p: &PhysicalParams, t: f64) -> Result<PointerMixture> {
    if t.is_nan() || t <= p.epsilon {
        return Err(Error::TimeBeforeInteractionEnd {
            t,
            epsilon: p.epsilon,
        });
    }
    check_narrow_regime(p, t)?;
    let prior = initial_quantum_density(p);
    let labels = prior.default_grid(LABEL_POINTS)?;
    let mut mix = PointerMixture::from_weights(labels, prior.sample_on(&labels), p, t)?;
    mix.prior = Some(prior);
    Ok(mix)
}

/// A single selected mixture element: a pointer on the trajectory
/// `x(t) = λ q t`. The density is the zero-width marker at that position.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PointerState {
    pub label: f64,
    pub lambda: f64,
    pub mass: f64,
    /// Time at which the element was selected.
    pub t: f64,
}

impl PointerState {
    pub fn position(&self, t: f64) -> f64 {
        self.lambda * self.label * t
    }

    pub fn velocity(&self) -> f64 {
        self.lambda * self.label
    }

    pub fn action(&self) -> ElementAction {
        ElementAction {
            q: self.label,
            lambda: self.lambda,
            mass: self.mass,
        }
    }
}

pub fn collapse_pointer(mix: &PointerMixture, q_prime: f64, t: f64) -> Result<PointerState> {
    let labels = mix.labels();
    if !labels.contains(q_prime) {
        return Err(Error::LabelOutOfRange {
            label: q_prime,
            min: labels.min(),
            max: labels.max(),
        });
    }
    Ok(PointerState {
        label: q_prime,
        lambda: mix.lambda,
        mass: mix.mass,
        t,
    })
}

/// Draws one label and selects that element at the mixture time.
pub fn sample_measurement(mix: &PointerMixture, seed: u64) -> Result<(f64, PointerState)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let q = mix.draw_label(&mut rng);
    Ok((q, collapse_pointer(mix, q, mix.t)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analytic::{free_pointer_density, ClassicalAction, PointerWidth};
    use proptest::prelude::*;

    fn desk() -> PointerMixture {
        decompose_pointer_mixture(&PhysicalParams::DESK, 2.0).unwrap()
    }

    #[test]
    fn marginal_is_narrow_free_density() {
        let p = PhysicalParams::DESK;
        let mix = desk();
        let free = free_pointer_density(&p, 2.0, PointerWidth::Narrow).unwrap();
        for i in 0..=200 {
            let x = -3.0 + 0.03 * i as f64;
            let a = mix.marginal_density(x);
            let b = free.pdf(x);
            assert!((a - b).abs() <= 1e-12 * b.max(1e-300), "{x}: {a} vs {b}");
        }
    }

    #[test]
    fn weights_are_symmetric_and_normalised() {
        let mix = desk();
        let w = mix.weights();
        let n = w.len();
        for i in 0..n / 2 {
            assert!((w[i] - w[n - 1 - i]).abs() <= 1e-12 * w[i].max(1e-300));
        }
        assert!((integrate_1d(w, mix.labels()).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn mean_speed_matches_sampling() {
        let mix = desk();
        let n = 100_000;
        let speeds: Vec<f64> = mix
            .sample_labels(n, 5)
            .iter()
            .map(|q| (mix.lambda() * q).abs())
            .collect();
        let mean = speeds.iter().sum::<f64>() / n as f64;
        let var = speeds.iter().map(|s| (s - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
        let se = (var / n as f64).sqrt();
        assert!((mean - mix.mean_speed()).abs() < 2.0 * se);
    }

    #[test]
    fn elements_satisfy_hamilton_jacobi() {
        let mix = desk();
        for q in [-1.2, -0.3, 0.0, 0.9] {
            let a = mix.element_action(q);
            for (x, t) in [(0.1, 2.0), (-3.0, 5.0)] {
                assert!(a.hj_residual(x, t).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn rejects_early_time_and_wide_pointer() {
        let p = PhysicalParams::DESK;
        assert!(matches!(
            decompose_pointer_mixture(&p, p.epsilon),
            Err(Error::TimeBeforeInteractionEnd { .. })
        ));
        let wide = PhysicalParams {
            sigma_c: 10.0,
            ..p
        };
        assert!(matches!(
            decompose_pointer_mixture(&wide, 2.0),
            Err(Error::RegimeViolation { .. })
        ));
    }

    #[test]
    fn collapse_examples() {
        let mix = desk();
        let still = collapse_pointer(&mix, 0.0, 2.0).unwrap();
        assert_eq!(still.position(0.0), 0.0);
        assert_eq!(still.position(7.0), 0.0);
        let moving = collapse_pointer(&mix, 1.0, 2.0).unwrap();
        assert_eq!(moving.position(2.0), 2.0);
        assert_eq!(collapse_pointer(&mix, 1.0, 2.0).unwrap(), moving);
        assert!(matches!(
            collapse_pointer(&mix, 50.0, 2.0),
            Err(Error::LabelOutOfRange { .. })
        ));
    }

    #[test]
    fn single_bin_weights_always_select_that_label() {
        let labels = Grid1D::new(-1.0, 1.0, 21).unwrap();
        let mut w = vec![0.0; 21];
        w[13] = 1.0;
        let mix = PointerMixture::from_weights(labels, w, &PhysicalParams::DESK, 2.0).unwrap();
        for seed in 0..50 {
            let (q, st) = sample_measurement(&mix, seed).unwrap();
            assert_eq!(q, labels.point(13));
            assert_eq!(st.label, q);
        }
    }

    #[test]
    fn zero_weights_are_degenerate() {
        let labels = Grid1D::new(-1.0, 1.0, 21).unwrap();
        assert!(matches!(
            PointerMixture::from_weights(labels, vec![0.0; 21], &PhysicalParams::DESK, 2.0),
            Err(Error::DegenerateWeights)
        ));
    }

    proptest! {
        #[test]
        fn seeded_sampling_is_reproducible(seed in any::<u64>()) {
            let mix = desk();
            let a = sample_measurement(&mix, seed).unwrap();
            let b = sample_measurement(&mix, seed).unwrap();
            prop_assert_eq!(a.0.to_bits(), b.0.to_bits());
            prop_assert_eq!(a.1, b.1);
        }
    }
}
