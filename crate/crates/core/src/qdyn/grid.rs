//! Uniform position grids and their conjugate (FFT-ordered) momentum grids.

use std::f64::consts::PI;

use crate::error::{Error, Result};

/// One uniformly spaced dimension.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Axis {
    pub x_min: f64,
    pub dx: f64,
    pub n: usize,
}

impl Axis {
    pub fn new(x_min: f64, dx: f64, n: usize) -> Result<Self> {
        if !(dx > 0.0) || !dx.is_finite() {
            return Err(Error::InvalidGrid(format!(
                "spacing must be positive, got {dx}"
            )));
        }
        if n < 2 || !n.is_power_of_two() {
            return Err(Error::InvalidGrid(format!(
                "point count must be a power of two >= 2, got {n}"
            )));
        }
        if !x_min.is_finite() {
            return Err(Error::InvalidGrid("x_min must be finite".into()));
        }
        Ok(Self { x_min, dx, n })
    }

    /// Smallest power-of-two axis with spacing `dx` covering `[lo, hi]`.
    pub fn covering(lo: f64, hi: f64, dx: f64) -> Result<Self> {
        if !(hi > lo) {
            return Err(Error::InvalidGrid(format!("empty interval [{lo}, {hi}]")));
        }
        let needed = ((hi - lo) / dx).ceil() as usize + 1;
        let n = needed.next_power_of_two().max(2);
        let centre = 0.5 * (lo + hi);
        Axis::new(centre - 0.5 * n as f64 * dx, dx, n)
    }

    #[inline]
    pub fn position(&self, i: usize) -> f64 {
        self.x_min + i as f64 * self.dx
    }

    pub fn positions(&self) -> Vec<f64> {
        (0..self.n).map(|i| self.position(i)).collect()
    }

    /// Last grid point.
    pub fn x_max(&self) -> f64 {
        self.position(self.n - 1)
    }

    /// Periodic extent n * dx.
    pub fn length(&self) -> f64 {
        self.n as f64 * self.dx
    }

    /// Signed FFT index: 0, 1, ..., n/2 - 1, -n/2, ..., -1.
    #[inline]
    pub fn wrapped_index(&self, j: usize) -> i64 {
        let half = self.n / 2;
        if j < half {
            j as i64
        } else {
            j as i64 - self.n as i64
        }
    }

    /// Wavenumber of FFT bin `j`.
    #[inline]
    pub fn wavenumber(&self, j: usize) -> f64 {
        2.0 * PI / self.length() * self.wrapped_index(j) as f64
    }

    /// Momenta p_j = hbar k_j in FFT order.
    pub fn momenta(&self, hbar: f64) -> Vec<f64> {
        (0..self.n).map(|j| hbar * self.wavenumber(j)).collect()
    }

    /// Largest representable momentum magnitude, pi hbar / dx.
    pub fn p_max(&self, hbar: f64) -> f64 {
        PI * hbar / self.dx
    }

    /// Index of the grid point nearest to `x`, or `None` outside the grid.
    pub fn nearest_index(&self, x: f64) -> Option<usize> {
        let f = (x - self.x_min) / self.dx;
        if f < -0.5 || f > self.n as f64 - 0.5 {
            return None;
        }
        Some((f.round() as usize).min(self.n - 1))
    }
}

/// A 1D or 2D tensor-product grid. In 2D the storage order is x-major:
/// `index = ix * ny + iy`.
#[derive(Debug, Clone, PartialEq)]
pub struct Grid {
    axes: Vec<Axis>,
}

impl Grid {
    pub fn one_d(x: Axis) -> Self {
        Self { axes: vec![x] }
    }

    pub fn two_d(x: Axis, y: Axis) -> Self {
        Self { axes: vec![x, y] }
    }

    pub fn dims(&self) -> usize {
        self.axes.len()
    }

    pub fn axis(&self, d: usize) -> &Axis {
        &self.axes[d]
    }

    pub fn axes(&self) -> &[Axis] {
        &self.axes
    }

    /// Total number of points.
    pub fn len(&self) -> usize {
        self.axes.iter().map(|a| a.n).product()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Integration weight of one cell (dx or dx*dy).
    pub fn cell_volume(&self) -> f64 {
        self.axes.iter().map(|a| a.dx).product()
    }

    /// Per-axis indices of flat index `idx`.
    #[inline]
    pub fn unravel(&self, idx: usize) -> [usize; 2] {
        match self.axes.len() {
            1 => [idx, 0],
            _ => {
                let ny = self.axes[1].n;
                [idx / ny, idx % ny]
            }
        }
    }

    /// Coordinate of flat index `idx` along axis `d`.
    #[inline]
    pub fn coordinate(&self, idx: usize, d: usize) -> f64 {
        self.axes[d].position(self.unravel(idx)[d])
    }

    /// Coordinates of every point along axis `d`, in storage order.
    pub fn coordinates(&self, d: usize) -> Vec<f64> {
        (0..self.len()).map(|i| self.coordinate(i, d)).collect()
    }

    /// Per-point momentum component along axis `d`, in storage order of the
    /// transformed array.
    pub fn momentum_components(&self, d: usize, hbar: f64) -> Vec<f64> {
        let p = self.axes[d].momenta(hbar);
        (0..self.len()).map(|i| p[self.unravel(i)[d]]).collect()
    }

    /// Kinetic energy sum_d p_d^2 / 2m at every momentum-space point.
    pub fn kinetic_energies(&self, mass: f64, hbar: f64) -> Vec<f64> {
        let mut t = vec![0.0; self.len()];
        for d in 0..self.dims() {
            let p = self.momentum_components(d, hbar);
            for (ti, pi) in t.iter_mut().zip(&p) {
                *ti += pi * pi / (2.0 * mass);
            }
        }
        t
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_non_power_of_two() {
        assert!(Axis::new(0.0, 0.1, 100).is_err());
        assert!(Axis::new(0.0, 0.0, 128).is_err());
        assert!(Axis::new(0.0, -0.1, 128).is_err());
        assert!(Axis::new(0.0, 0.1, 128).is_ok());
    }

    #[test]
    fn momentum_grid_reaches_nyquist() {
        let ax = Axis::new(-5.0, 0.05, 256).unwrap();
        let hbar = 0.1;
        let p = ax.momenta(hbar);
        let pmax = p.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        assert!((pmax - ax.p_max(hbar)).abs() < 1e-12);
        assert_eq!(p[0], 0.0);
        assert!(p[1] > 0.0 && p[255] < 0.0);
    }

    #[test]
    fn covering_axis_spans_interval() {
        let ax = Axis::covering(-10.0, 30.0, 0.1).unwrap();
        assert!(ax.x_min <= -10.0 && ax.x_max() >= 30.0);
        assert!(ax.n.is_power_of_two());
    }

    #[test]
    fn nearest_index_bounds() {
        let ax = Axis::new(0.0, 1.0, 8).unwrap();
        assert_eq!(ax.nearest_index(3.4), Some(3));
        assert_eq!(ax.nearest_index(3.6), Some(4));
        assert_eq!(ax.nearest_index(-0.6), None);
        assert_eq!(ax.nearest_index(7.4), Some(7));
        assert_eq!(ax.nearest_index(7.6), None);
    }

    #[test]
    fn two_d_storage_is_x_major() {
        let g = Grid::two_d(
            Axis::new(0.0, 1.0, 4).unwrap(),
            Axis::new(10.0, 0.5, 8).unwrap(),
        );
        assert_eq!(g.len(), 32);
        assert_eq!(g.unravel(9), [1, 1]);
        assert_eq!(g.coordinate(9, 0), 1.0);
        assert_eq!(g.coordinate(9, 1), 10.5);
        assert_eq!(g.cell_volume(), 0.5);
    }
}
