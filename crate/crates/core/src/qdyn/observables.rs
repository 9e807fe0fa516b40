//! Energy and phase-space moments of a grid wavefunction.

use num_complex::Complex64;

use super::fft::GridFft;
use super::grid::Grid;
use super::propagator::Hamiltonian;
use super::state::WavefunctionState;
use crate::error::Result;

/// Moments of a state, normalised by its current norm.
#[derive(Debug, Clone, PartialEq)]
pub struct Moments {
    pub norm: f64,
    pub mean_h: f64,
    pub mean_h2: f64,
    pub delta_e: f64,
    pub mean_v: f64,
    /// Per dimension.
    pub mean_x: Vec<f64>,
    pub mean_x2: Vec<f64>,
    pub mean_p: Vec<f64>,
    pub mean_p2: Vec<f64>,
}

impl Moments {
    pub fn var_x(&self, d: usize) -> f64 {
        self.mean_x2[d] - self.mean_x[d] * self.mean_x[d]
    }

    pub fn var_p(&self, d: usize) -> f64 {
        self.mean_p2[d] - self.mean_p[d] * self.mean_p[d]
    }
}

/// Reusable evaluator: holds the FFT plan, sampled potential and momentum grids.
#[derive(Debug, Clone)]
pub struct MomentEvaluator {
    grid: Grid,
    fft: GridFft,
    potential: Vec<f64>,
    kinetic: Vec<f64>,
    coords: Vec<Vec<f64>>,
    momenta: Vec<Vec<f64>>,
    scratch: Vec<Complex64>,
    phi: Vec<Complex64>,
    h_psi: Vec<Complex64>,
}

impl MomentEvaluator {
    pub fn new(grid: &Grid, ham: &Hamiltonian) -> Result<Self> {
        let fft = GridFft::new(grid);
        let scratch = fft.make_scratch();
        Ok(Self {
            grid: grid.clone(),
            potential: ham.potential.sample(grid)?,
            kinetic: grid.kinetic_energies(ham.mass, ham.hbar),
            coords: (0..grid.dims()).map(|d| grid.coordinates(d)).collect(),
            momenta: (0..grid.dims())
                .map(|d| grid.momentum_components(d, ham.hbar))
                .collect(),
            fft,
            scratch,
            phi: Vec::new(),
            h_psi: Vec::new(),
        })
    }

    pub fn evaluate(&mut self, state: &WavefunctionState) -> Moments {
        let psi = &state.amplitudes;
        let n = psi.len();
        let dims = self.grid.dims();
        let dv = self.grid.cell_volume();

        let mut w_sum = 0.0;
        let mut mean_x = vec![0.0; dims];
        let mut mean_x2 = vec![0.0; dims];
        let mut mean_v = 0.0;
        for i in 0..n {
            let w = psi[i].norm_sqr();
            w_sum += w;
            mean_v += w * self.potential[i];
            for d in 0..dims {
                let x = self.coords[d][i];
                mean_x[d] += w * x;
                mean_x2[d] += w * x * x;
            }
        }
        let norm = w_sum * dv;

        // Momentum space: Parseval weight of |phi_k|^2 is 1 / n relative to position space.
        self.phi.clear();
        self.phi.extend_from_slice(psi);
        self.fft.forward(&mut self.phi, &mut self.scratch);
        let mut k_sum = 0.0;
        let mut mean_p = vec![0.0; dims];
        let mut mean_p2 = vec![0.0; dims];
        for (k, c) in self.phi.iter_mut().enumerate() {
            let w = c.norm_sqr();
            k_sum += w;
            for d in 0..dims {
                let p = self.momenta[d][k];
                mean_p[d] += w * p;
                mean_p2[d] += w * p * p;
            }
            *c *= self.kinetic[k];
        }
        self.fft.inverse(&mut self.phi, &mut self.scratch);
        self.h_psi.clear();
        self.h_psi.extend(
            self.phi
                .iter()
                .zip(psi)
                .zip(&self.potential)
                .map(|((t, p), v)| t + p * v),
        );

        let mut h1 = 0.0;
        let mut h2 = 0.0;
        for (p, hp) in psi.iter().zip(&self.h_psi) {
            h1 += (p.conj() * hp).re;
            h2 += hp.norm_sqr();
        }
        let inv = if w_sum > 0.0 { 1.0 / w_sum } else { 0.0 };
        let kinv = if k_sum > 0.0 { 1.0 / k_sum } else { 0.0 };
        for d in 0..dims {
            mean_x[d] *= inv;
            mean_x2[d] *= inv;
            mean_p[d] *= kinv;
            mean_p2[d] *= kinv;
        }
        let mean_h = h1 * inv;
        let mean_h2 = h2 * inv;
        Moments {
            norm,
            mean_h,
            mean_h2,
            delta_e: (mean_h2 - mean_h * mean_h).max(0.0).sqrt(),
            mean_v: mean_v * inv,
            mean_x,
            mean_x2,
            mean_p,
            mean_p2,
        }
    }
}

/// One-off moment evaluation.
pub fn expectation_moments(state: &WavefunctionState, ham: &Hamiltonian) -> Result<Moments> {
    Ok(MomentEvaluator::new(&state.grid, ham)?.evaluate(state))
}
