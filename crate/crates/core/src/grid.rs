//! Uniform grids.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Uniform 1-D grid with `n` points from `min` to `max` inclusive.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "GridSpec", into = "GridSpec")]
pub struct Grid1D {
    min: f64,
    max: f64,
    n: usize,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct GridSpec {
    min: f64,
    max: f64,
    n: usize,
}

impl TryFrom<GridSpec> for Grid1D {
    type Error = Error;
    fn try_from(s: GridSpec) -> Result<Self> {
        Grid1D::new(s.min, s.max, s.n)
    }
}

impl From<Grid1D> for GridSpec {
    fn from(g: Grid1D) -> Self {
        GridSpec {
            min: g.min,
            max: g.max,
            n: g.n,
        }
    }
}

impl Grid1D {
    pub fn new(min: f64, max: f64, n: usize) -> Result<Self> {
        if !(min.is_finite() && max.is_finite()) {
            return Err(Error::InvalidGrid(format!("non-finite bounds [{min}, {max}]")));
        }
        if min >= max {
            return Err(Error::InvalidGrid(format!("min {min} must be below max {max}")));
        }
        if n < 2 {
            return Err(Error::InvalidGrid(format!("need at least 2 points, got {n}")));
        }
        Ok(Self { min, max, n })
    }

    /// Symmetric grid `[center - half_width, center + half_width]`.
    pub fn centered(center: f64, half_width: f64, n: usize) -> Result<Self> {
        Self::new(center - half_width, center + half_width, n)
    }

    pub fn min(&self) -> f64 {
        self.min
    }

    pub fn max(&self) -> f64 {
        self.max
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn spacing(&self) -> f64 {
        (self.max - self.min) / (self.n - 1) as f64
    }

    /// Coordinate of point `i`; the last point is exactly `max`.
    pub fn point(&self, i: usize) -> f64 {
        if i + 1 == self.n {
            self.max
        } else {
            self.min + i as f64 * self.spacing()
        }
    }

    pub fn points(&self) -> Vec<f64> {
        (0..self.n).map(|i| self.point(i)).collect()
    }

    pub fn contains(&self, x: f64) -> bool {
        x >= self.min && x <= self.max
    }

    /// Samples `f` at every grid point.
    pub fn sample(&self, f: impl Fn(f64) -> f64) -> Vec<f64> {
        (0..self.n).map(|i| f(self.point(i))).collect()
    }

    /// Index of the grid point nearest to `x` (clamped to the grid).
    pub fn nearest_index(&self, x: f64) -> usize {
        let r = ((x - self.min) / self.spacing()).round();
        r.clamp(0.0, (self.n - 1) as f64) as usize
    }

    pub(crate) fn check_len(&self, len: usize) -> Result<()> {
        if len == self.n {
            Ok(())
        } else {
            Err(Error::GridMismatch {
                field: len,
                grid: self.n,
            })
        }
    }
}

/// Tensor product of a pointer axis `x` and a quantum axis `q`.
///
/// Fields on the grid are stored row-major with `x` as the outer index:
/// the value at `(x_i, q_j)` lives at `i * q.len() + j`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Grid2D {
    pub x: Grid1D,
    pub q: Grid1D,
}

impl Grid2D {
    pub fn new(x: Grid1D, q: Grid1D) -> Self {
        Self { x, q }
    }

    pub fn len(&self) -> usize {
        self.x.len() * self.q.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.x.len(), self.q.len())
    }

    #[inline]
    pub fn index(&self, i: usize, j: usize) -> usize {
        i * self.q.len() + j
    }

    pub fn sample(&self, f: impl Fn(f64, f64) -> f64 + Sync) -> Vec<f64> {
        use rayon::prelude::*;
        let nq = self.q.len();
        let mut out = vec![0.0; self.len()];
        out.par_chunks_mut(nq).enumerate().for_each(|(i, row)| {
            let x = self.x.point(i);
            for (j, v) in row.iter_mut().enumerate() {
                *v = f(x, self.q.point(j));
            }
        });
        out
    }

    pub(crate) fn check_len(&self, len: usize) -> Result<()> {
        if len == self.len() {
            Ok(())
        } else {
            Err(Error::GridMismatch {
                field: len,
                grid: self.len(),
            })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spacing_and_endpoints() {
        let g = Grid1D::new(-1.0, 1.0, 5).unwrap();
        assert_eq!(g.spacing(), 0.5);
        assert_eq!(g.points(), vec![-1.0, -0.5, 0.0, 0.5, 1.0]);
    }

    #[test]
    fn last_point_is_exact() {
        let g = Grid1D::new(0.1, 0.7, 7).unwrap();
        assert_eq!(g.point(6), 0.7);
        let pts = g.points();
        assert!(pts.windows(2).all(|w| w[1] > w[0]));
    }

    #[test]
    fn rejects_bad_grids() {
        assert!(Grid1D::new(1.0, 1.0, 10).is_err());
        assert!(Grid1D::new(0.0, 1.0, 1).is_err());
        assert!(Grid1D::new(f64::NAN, 1.0, 10).is_err());
    }

    #[test]
    fn row_major_layout() {
        let g = Grid2D::new(
            Grid1D::new(0.0, 1.0, 3).unwrap(),
            Grid1D::new(0.0, 2.0, 4).unwrap(),
        );
        let f = g.sample(|x, q| 10.0 * x + q);
        assert_eq!(f[g.index(2, 3)], 12.0);
        assert_eq!(f[g.index(1, 0)], 5.0);
    }

    #[test]
    fn serde_validates() {
        let g: Grid1D = serde_json::from_str(r#"{"min":-1,"max":1,"n":11}"#).unwrap();
        assert_eq!(g.len(), 11);
        assert!(serde_json::from_str::<Grid1D>(r#"{"min":1,"max":-1,"n":11}"#).is_err());
    }
}
