//! Second-order finite differences along one axis of a row-major field.
//!
//! Interior points use central stencils; the two boundary points use
//! one-sided second-order stencils.

/// Axis of a 2-D field stored with `x` outer and `q` inner.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axis {
    X,
    Q,
}

/// First derivative of a 1-D sample vector. Needs at least 3 points.
pub fn d1_line(f: &[f64], h: f64, out: &mut [f64]) {
    let n = f.len();
    debug_assert!(n >= 3);
    let inv = 0.5 / h;
    out[0] = (-3.0 * f[0] + 4.0 * f[1] - f[2]) * inv;
    for i in 1..n - 1 {
        out[i] = (f[i + 1] - f[i - 1]) * inv;
    }
    out[n - 1] = (3.0 * f[n - 1] - 4.0 * f[n - 2] + f[n - 3]) * inv;
}

/// Second derivative of a 1-D sample vector. Needs at least 4 points.
pub fn d2_line(f: &[f64], h: f64, out: &mut [f64]) {
    let n = f.len();
    debug_assert!(n >= 4);
    let inv = 1.0 / (h * h);
    out[0] = (2.0 * f[0] - 5.0 * f[1] + 4.0 * f[2] - f[3]) * inv;
    for i in 1..n - 1 {
        out[i] = (f[i + 1] - 2.0 * f[i] + f[i - 1]) * inv;
    }
    out[n - 1] = (2.0 * f[n - 1] - 5.0 * f[n - 2] + 4.0 * f[n - 3] - f[n - 4]) * inv;
}

pub fn d1(f: &[f64], h: f64) -> Vec<f64> {
    let mut out = vec![0.0; f.len()];
    d1_line(f, h, &mut out);
    out
}

pub fn d2(f: &[f64], h: f64) -> Vec<f64> {
    let mut out = vec![0.0; f.len()];
    d2_line(f, h, &mut out);
    out
}

fn apply_2d(
    f: &[f64],
    (nx, nq): (usize, usize),
    h: f64,
    axis: Axis,
    line: fn(&[f64], f64, &mut [f64]),
) -> Vec<f64> {
    use rayon::prelude::*;
    let mut out = vec![0.0; f.len()];
    match axis {
        Axis::Q => {
            out.par_chunks_mut(nq)
                .zip(f.par_chunks(nq))
                .for_each(|(o, row)| line(row, h, o));
        }
        Axis::X => {
            let cols: Vec<Vec<f64>> = (0..nq)
                .into_par_iter()
                .map(|j| {
                    let col: Vec<f64> = (0..nx).map(|i| f[i * nq + j]).collect();
                    let mut d = vec![0.0; nx];
                    line(&col, h, &mut d);
                    d
                })
                .collect();
            for (j, d) in cols.iter().enumerate() {
                for (i, v) in d.iter().enumerate() {
                    out[i * nq + j] = *v;
                }
            }
        }
    }
    out
}

/// First derivative of a 2-D field along `axis`.
pub fn d1_2d(f: &[f64], shape: (usize, usize), h: f64, axis: Axis) -> Vec<f64> {
    apply_2d(f, shape, h, axis, d1_line)
}

/// Second derivative of a 2-D field along `axis`.
pub fn d2_2d(f: &[f64], shape: (usize, usize), h: f64, axis: Axis) -> Vec<f64> {
    apply_2d(f, shape, h, axis, d2_line)
}
