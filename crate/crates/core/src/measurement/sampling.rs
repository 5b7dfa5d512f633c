use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::analytic::initial_quantum_density;
use crate::error::{Error, Result};
use crate::params::PhysicalParams;

/// `n` pointer positions `x = λ q t` with `q` drawn from the initial
/// quantum density.
pub fn monte_carlo_pointer(p: &PhysicalParams, t: f64, n: usize, seed: u64) -> Result<Vec<f64>> {
    if n == 0 {
        return Err(Error::InvalidConfig("sample count must be >= 1".into()));
    }
    if t.is_nan() || t <= p.epsilon {
        return Err(Error::TimeBeforeInteractionEnd {
            t,
            epsilon: p.epsilon,
        });
    }
    let rho = initial_quantum_density(p);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Ok((0..n).map(|_| p.lambda * rho.sample(&mut rng) * t).collect())
}

/// One-sample Kolmogorov–Smirnov statistic `sup |F_n − F|`.
pub fn ks_statistic(samples: &[f64], cdf: impl Fn(f64) -> f64) -> f64 {
    let mut xs = samples.to_vec();
    xs.sort_by(f64::total_cmp);
    let n = xs.len() as f64;
    xs.iter()
        .enumerate()
        .map(|(i, x)| {
            let f = cdf(*x);
            (f - i as f64 / n).max((i + 1) as f64 / n - f)
        })
        .fold(0.0, f64::max)
}
