//! Normalised forward/inverse FFTs over a [`Grid`], built on `rustfft`.

use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use super::grid::Grid;

/// Plans for every axis of a grid. Cloning is cheap (plans are shared).
#[derive(Clone)]
pub struct GridFft {
    dims: [usize; 2],
    forward: [Arc<dyn Fft<f64>>; 2],
    inverse: [Arc<dyn Fft<f64>>; 2],
    scratch_len: usize,
}

impl std::fmt::Debug for GridFft {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("GridFft").field("dims", &self.dims).finish()
    }
}

impl GridFft {
    pub fn new(grid: &Grid) -> Self {
        let mut planner = FftPlanner::<f64>::new();
        let nx = grid.axis(0).n;
        let ny = if grid.dims() == 2 { grid.axis(1).n } else { 1 };
        let fx = planner.plan_fft_forward(nx);
        let ix = planner.plan_fft_inverse(nx);
        let fy = planner.plan_fft_forward(ny.max(1));
        let iy = planner.plan_fft_inverse(ny.max(1));
        let scratch_len = [&fx, &ix, &fy, &iy]
            .iter()
            .map(|p| p.get_inplace_scratch_len())
            .max()
            .unwrap_or(0);
        // 2D transforms also need a transpose buffer.
        let scratch_len = if ny > 1 {
            scratch_len + nx * ny
        } else {
            scratch_len
        };
        Self {
            dims: [nx, ny],
            forward: [fx, fy],
            inverse: [ix, iy],
            scratch_len,
        }
    }

    /// Scratch buffer sized for [`forward`](Self::forward) / [`inverse`](Self::inverse).
    pub fn make_scratch(&self) -> Vec<Complex64> {
        vec![Complex64::new(0.0, 0.0); self.scratch_len]
    }

    /// Unnormalised forward transform in place.
    pub fn forward(&self, data: &mut [Complex64], scratch: &mut Vec<Complex64>) {
        self.transform(data, scratch, true);
    }

    /// Inverse transform in place, scaled so that `inverse(forward(x)) == x`.
    pub fn inverse(&self, data: &mut [Complex64], scratch: &mut Vec<Complex64>) {
        self.transform(data, scratch, false);
        let scale = 1.0 / data.len() as f64;
        for v in data.iter_mut() {
            *v *= scale;
        }
    }

    fn transform(&self, data: &mut [Complex64], scratch: &mut Vec<Complex64>, forward: bool) {
        let [nx, ny] = self.dims;
        debug_assert_eq!(data.len(), nx * ny);
        if scratch.len() < self.scratch_len {
            scratch.resize(self.scratch_len, Complex64::new(0.0, 0.0));
        }
        let plans = if forward {
            &self.forward
        } else {
            &self.inverse
        };
        if ny == 1 {
            plans[0].process_with_scratch(data, &mut scratch[..plans[0].get_inplace_scratch_len()]);
            return;
        }
        let (t, work) = scratch.split_at_mut(nx * ny);
        // y is contiguous: transform all columns at once.
        let sy = plans[1].get_inplace_scratch_len();
        plans[1].process_with_scratch(data, &mut work[..sy]);
        // x: transpose, transform rows, transpose back.
        transpose(data, t, nx, ny);
        let sx = plans[0].get_inplace_scratch_len();
        plans[0].process_with_scratch(t, &mut work[..sx]);
        transpose(t, data, ny, nx);
    }
}

/// `dst[c * rows + r] = src[r * cols + c]`.
fn transpose(src: &[Complex64], dst: &mut [Complex64], rows: usize, cols: usize) {
    for r in 0..rows {
        let row = &src[r * cols..(r + 1) * cols];
        for (c, v) in row.iter().enumerate() {
            dst[c * rows + r] = *v;
        }
    }
}
