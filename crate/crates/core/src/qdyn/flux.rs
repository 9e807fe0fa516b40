//! Probability flux through a line `y = y_I` of a 2D grid.

use std::f64::consts::PI;

use num_complex::Complex64;

use super::grid::Grid;
use super::state::WavefunctionState;
use crate::error::{Error, Result};

/// How `d psi / dy` is evaluated on the flux row.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Derivative {
    Spectral,
    /// Fourth-order centred difference.
    FiniteDifference,
}

#[derive(Debug, Clone)]
pub struct FluxLine {
    row: usize,
    y: f64,
    ny: usize,
    nx: usize,
    dx: f64,
    prefactor: f64,
    weights: Vec<(usize, Complex64)>,
}

impl FluxLine {
    /// Flux line on the grid row nearest `y_i`.
    pub fn new(grid: &Grid, y_i: f64, mass: f64, hbar: f64, method: Derivative) -> Result<Self> {
        if grid.dims() != 2 {
            return Err(Error::GridMismatch("flux line needs a 2D grid".into()));
        }
        let ay = grid.axis(1);
        let out = || Error::FluxLineOutsideGrid {
            y: y_i,
            y_min: ay.x_min,
            y_max: ay.x_max(),
        };
        let row = ay.nearest_index(y_i).ok_or_else(out)?;
        let ny = ay.n;
        let weights = match method {
            Derivative::Spectral => {
                // Row of the spectral differentiation matrix with the Nyquist mode dropped.
                let mut w = Vec::with_capacity(ny);
                for j in 0..ny {
                    let mut acc = Complex64::new(0.0, 0.0);
                    for k in 0..ny {
                        if k == ny / 2 {
                            continue;
                        }
                        let kk = ay.wavenumber(k);
                        let ph = 2.0 * PI * (k as f64) * ((row as f64) - (j as f64)) / ny as f64;
                        acc += Complex64::new(0.0, kk) * Complex64::from_polar(1.0, ph);
                    }
                    w.push((j, acc / ny as f64));
                }
                w
            }
            Derivative::FiniteDifference => {
                if row < 2 || row + 2 >= ny {
                    return Err(out());
                }
                let h = ay.dx;
                vec![
                    (row - 2, Complex64::new(1.0 / (12.0 * h), 0.0)),
                    (row - 1, Complex64::new(-8.0 / (12.0 * h), 0.0)),
                    (row + 1, Complex64::new(8.0 / (12.0 * h), 0.0)),
                    (row + 2, Complex64::new(-1.0 / (12.0 * h), 0.0)),
                ]
            }
        };
        Ok(Self {
            row,
            y: ay.position(row),
            ny,
            nx: grid.axis(0).n,
            dx: grid.axis(0).dx,
            prefactor: hbar / mass,
            weights,
        })
    }

    /// Actual y of the row used.
    pub fn y(&self) -> f64 {
        self.y
    }

    pub fn row(&self) -> usize {
        self.row
    }

    /// `(hbar/mu) Im int psi* d psi/dy dx` at `y = y_I`.
    pub fn flux(&self, state: &WavefunctionState) -> f64 {
        let psi = &state.amplitudes;
        let mut acc = 0.0;
        for ix in 0..self.nx {
            let base = ix * self.ny;
            let mut d = Complex64::new(0.0, 0.0);
            for &(j, w) in &self.weights {
                d += w * psi[base + j];
            }
            acc += (psi[base + self.row].conj() * d).im;
        }
        self.prefactor * acc * self.dx
    }
}

/// Time integral of the flux with the trapezoid rule.
#[derive(Debug, Clone, Default)]
pub struct FluxAccumulator {
    last: Option<(f64, f64)>,
    pub integral: f64,
}

impl FluxAccumulator {
    pub fn record(&mut self, time: f64, flux: f64) {
        if let Some((t0, f0)) = self.last {
            self.integral += 0.5 * (f0 + flux) * (time - t0);
        }
        self.last = Some((time, flux));
    }
}

/// One-off flux evaluation with the spectral derivative.
pub fn flux_through_line(state: &WavefunctionState, y_i: f64, mass: f64, hbar: f64) -> Result<f64> {
    Ok(FluxLine::new(&state.grid, y_i, mass, hbar, Derivative::Spectral)?.flux(state))
}
