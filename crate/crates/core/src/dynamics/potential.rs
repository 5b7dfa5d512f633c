use crate::diff::d2;
use crate::error::{Error, Result};
use crate::grid::Grid1D;

/// Relative density floor for the `√P` stencil.
pub const DENSITY_FLOOR: f64 = 1e-12;

fn check(p: &[f64], grid: &Grid1D) -> Result<f64> {
    grid.check_len(p.len())?;
    if grid.len() < 4 {
        return Err(Error::GridTooCoarse(format!("{} points", grid.len())));
    }
    if p.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFiniteField("P"));
    }
    Ok(p.iter().cloned().fold(0.0, f64::max))
}

fn bohm(r: &[f64], h: f64, m: f64, hbar: f64) -> Vec<f64> {
    let lap = d2(r, h);
    let c = -hbar * hbar / (2.0 * m);
    lap.iter().zip(r).map(|(l, ri)| c * l / ri).collect()
}

/// Bohm quantum potential `Q = −(ħ²/2m) ∂²√P / √P` of a 1-D density.
///
/// Every point must lie above `DENSITY_FLOOR · max P`.
pub fn quantum_potential(p: &[f64], grid: &Grid1D, m: f64, hbar: f64) -> Result<Vec<f64>> {
    let top = check(p, grid)?;
    if hbar == 0.0 {
        return Ok(vec![0.0; p.len()]);
    }
    let floor = DENSITY_FLOOR * top;
    if let Some((index, &value)) = p.iter().enumerate().find(|(_, v)| !(**v > floor)) {
        return Err(Error::DensityFloorViolation { index, value, floor });
    }
    let r: Vec<f64> = p.iter().map(|v| v.sqrt()).collect();
    Ok(bohm(&r, grid.spacing(), m, hbar))
}

/// As [`quantum_potential`], with densities below the floor raised to it
/// inside the `√P` stencil.
pub fn quantum_potential_clamped(
    p: &[f64],
    grid: &Grid1D,
    m: f64,
    hbar: f64,
) -> Result<Vec<f64>> {
    let top = check(p, grid)?;
    if hbar == 0.0 {
        return Ok(vec![0.0; p.len()]);
    }
    let floor = DENSITY_FLOOR * top;
    if !(floor > 0.0) {
        return Err(Error::DegenerateWeights);
    }
    let r: Vec<f64> = p.iter().map(|v| v.max(floor).sqrt()).collect();
    Ok(bohm(&r, grid.spacing(), m, hbar))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mixture::normal_pdf;
    use rand::{Rng, SeedableRng};

    #[test]
    fn gaussian_matches_closed_form() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for _ in 0..5 {
            let mu: f64 = rng.random_range(-2.0..2.0);
            let sigma: f64 = rng.random_range(0.05..1.0);
            let (m, hbar) = (1.3, 0.7);
            let g = Grid1D::centered(mu, 6.0 * sigma, 2001).unwrap();
            let p = g.sample(|q| normal_pdf(q, mu, sigma));
            let qp = quantum_potential(&p, &g, m, hbar).unwrap();
            let exact = g.sample(|q| {
                hbar * hbar / (4.0 * m * sigma * sigma)
                    * (1.0 - (q - mu).powi(2) / (2.0 * sigma * sigma))
            });
            let scale = exact.iter().map(|v| v.abs()).fold(0.0, f64::max);
            let err = (1..g.len() - 1)
                .map(|i| (qp[i] - exact[i]).abs())
                .fold(0.0, f64::max);
            assert!(err / scale < 1e-4, "rel err {}", err / scale);
        }
    }

    #[test]
    fn classical_limit_is_zero() {
        let g = Grid1D::new(0.0, 1.0, 11).unwrap();
        let p = g.sample(|q| 1.0 + q);
        assert!(quantum_potential(&p, &g, 1.0, 0.0).unwrap().iter().all(|v| *v == 0.0));
    }

    #[test]
    fn constant_density_is_zero() {
        let g = Grid1D::new(0.0, 1.0, 11).unwrap();
        let qp = quantum_potential(&[0.3; 11], &g, 1.0, 1.0).unwrap();
        assert!(qp.iter().all(|v| v.abs() < 1e-9));
    }

    #[test]
    fn empty_region_is_rejected_or_clamped() {
        let g = Grid1D::new(-1.0, 1.0, 21).unwrap();
        let p = g.sample(|q| if q.abs() < 0.5 { 1.0 - 2.0 * q.abs() } else { 0.0 });
        assert!(matches!(
            quantum_potential(&p, &g, 1.0, 1.0),
            Err(Error::DensityFloorViolation { index: 0, .. })
        ));
        let qp = quantum_potential_clamped(&p, &g, 1.0, 1.0).unwrap();
        assert!(qp.iter().all(|v| v.is_finite()));
    }
}
