//! Trapezoid quadrature on uniform grids.

use crate::error::Result;
use crate::grid::{Grid1D, Grid2D};

fn trapezoid(values: &[f64], h: f64) -> f64 {
    let n = values.len();
    let inner: f64 = values[1..n - 1].iter().sum();
    h * (inner + 0.5 * (values[0] + values[n - 1]))
}

/// Trapezoid integral of a field sampled on `grid`.
pub fn integrate_1d(f: &[f64], grid: &Grid1D) -> Result<f64> {
    grid.check_len(f.len())?;
    Ok(trapezoid(f, grid.spacing()))
}

/// Trapezoid integral over both axes.
pub fn integrate_2d(f: &[f64], grid: &Grid2D) -> Result<f64> {
    grid.check_len(f.len())?;
    let nq = grid.q.len();
    let hq = grid.q.spacing();
    let rows: Vec<f64> = f.chunks(nq).map(|row| trapezoid(row, hq)).collect();
    Ok(trapezoid(&rows, grid.x.spacing()))
}

/// Integral over `q` at every `x`, i.e. the pointer marginal.
pub fn marginal_x(f: &[f64], grid: &Grid2D) -> Result<Vec<f64>> {
    grid.check_len(f.len())?;
    let hq = grid.q.spacing();
    Ok(f.chunks(grid.q.len()).map(|row| trapezoid(row, hq)).collect())
}

/// Integral over `x` at every `q`.
pub fn marginal_q(f: &[f64], grid: &Grid2D) -> Result<Vec<f64>> {
    grid.check_len(f.len())?;
    let (nx, nq) = grid.shape();
    let hx = grid.x.spacing();
    let mut out = vec![0.0; nq];
    for i in 0..nx {
        let w = if i == 0 || i == nx - 1 { 0.5 * hx } else { hx };
        for (o, v) in out.iter_mut().zip(&f[i * nq..(i + 1) * nq]) {
            *o += w * v;
        }
    }
    Ok(out)
}

/// `∫|f − g|` on a 1-D grid.
pub fn l1_distance_1d(f: &[f64], g: &[f64], grid: &Grid1D) -> Result<f64> {
    grid.check_len(f.len())?;
    grid.check_len(g.len())?;
    let d: Vec<f64> = f.iter().zip(g).map(|(a, b)| (a - b).abs()).collect();
    integrate_1d(&d, grid)
}

/// `∫∫|f − g|` on a 2-D grid.
pub fn l1_distance_2d(f: &[f64], g: &[f64], grid: &Grid2D) -> Result<f64> {
    grid.check_len(f.len())?;
    grid.check_len(g.len())?;
    let d: Vec<f64> = f.iter().zip(g).map(|(a, b)| (a - b).abs()).collect();
    integrate_2d(&d, grid)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Error;

    #[test]
    fn constant_is_exact() {
        for n in [2, 3, 10, 101] {
            let g = Grid1D::new(0.0, 1.0, n).unwrap();
            let v = integrate_1d(&vec![1.0; n], &g).unwrap();
            assert!((v - 1.0).abs() < 1e-15, "n={n}: {v}");
        }
    }

    #[test]
    fn unit_gaussian_against_erf() {
        let g = Grid1D::new(-8.0, 8.0, 801).unwrap();
        let f = g.sample(|x| (-0.5 * x * x).exp() / (2.0 * std::f64::consts::PI).sqrt());
        let exact = libm::erf(8.0 / std::f64::consts::SQRT_2);
        let v = integrate_1d(&f, &g).unwrap();
        assert!((v - exact).abs() < 1e-10);
        assert!((v - 1.0).abs() < 1e-10);
    }

    #[test]
    fn odd_function_vanishes() {
        let g = Grid1D::new(-5.0, 5.0, 1001).unwrap();
        let f = g.sample(|x| x * (-x * x).exp());
        assert!(integrate_1d(&f, &g).unwrap().abs() < 1e-14);
    }

    #[test]
    fn length_mismatch() {
        let g = Grid1D::new(0.0, 1.0, 5).unwrap();
        assert!(matches!(
            integrate_1d(&[1.0; 4], &g),
            Err(Error::GridMismatch { field: 4, grid: 5 })
        ));
    }

    #[test]
    fn product_separates() {
        let gx = Grid1D::new(-6.0, 6.0, 301).unwrap();
        let gq = Grid1D::new(-7.0, 7.0, 201).unwrap();
        let g = Grid2D::new(gx, gq);
        let f = g.sample(|x, q| (-x * x / 2.0 - q * q / 2.0).exp());
        let fx = integrate_1d(&gx.sample(|x| (-x * x / 2.0).exp()), &gx).unwrap();
        let fq = integrate_1d(&gq.sample(|q| (-q * q / 2.0).exp()), &gq).unwrap();
        let v = integrate_2d(&f, &g).unwrap();
        assert!((v - fx * fq).abs() < 1e-12);
        let mq = marginal_q(&f, &g).unwrap();
        assert!((integrate_1d(&mq, &gq).unwrap() - v).abs() < 1e-12);
    }
}
