use num_complex::Complex64;

use super::grid::Grid;

/// Complex amplitudes on a grid plus the probability removed by each absorbing
/// channel so far.
#[derive(Debug, Clone, PartialEq)]
pub struct WavefunctionState {
    pub grid: Grid,
    pub amplitudes: Vec<Complex64>,
    pub absorbed_reactant: f64,
    pub absorbed_product: f64,
    pub time: f64,
}

impl WavefunctionState {
    pub fn new(grid: Grid, amplitudes: Vec<Complex64>) -> Self {
        assert_eq!(
            grid.len(),
            amplitudes.len(),
            "amplitude count must match grid"
        );
        Self {
            grid,
            amplitudes,
            absorbed_reactant: 0.0,
            absorbed_product: 0.0,
            time: 0.0,
        }
    }

    pub fn zeros(grid: Grid) -> Self {
        let n = grid.len();
        Self::new(grid, vec![Complex64::new(0.0, 0.0); n])
    }

    /// Integrated probability sum |psi|^2 dV.
    pub fn norm_sq(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum::<f64>() * self.grid.cell_volume()
    }

    pub fn absorbed(&self) -> f64 {
        self.absorbed_reactant + self.absorbed_product
    }

    /// Remaining norm plus everything absorbed.
    pub fn total_probability(&self) -> f64 {
        self.norm_sq() + self.absorbed()
    }

    /// Scales amplitudes so that `norm_sq() == target`.
    pub fn renormalize_to(&mut self, target: f64) {
        let n = self.norm_sq();
        if n > 0.0 {
            let s = (target / n).sqrt();
            for a in &mut self.amplitudes {
                *a *= s;
            }
        }
    }

    /// Probability in the region where `pred(point)` holds.
    pub fn probability_where<F: Fn(&[f64]) -> bool>(&self, pred: F) -> f64 {
        let dims = self.grid.dims();
        let mut q = [0.0; 2];
        let mut acc = 0.0;
        for (i, a) in self.amplitudes.iter().enumerate() {
            let idx = self.grid.unravel(i);
            for d in 0..dims {
                q[d] = self.grid.axis(d).position(idx[d]);
            }
            if pred(&q[..dims]) {
                acc += a.norm_sqr();
            }
        }
        acc * self.grid.cell_volume()
    }

    /// Largest pointwise amplitude difference to another state on the same grid.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }
}
