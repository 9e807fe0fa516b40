//! Strang split-operator propagation `e^{-iV dt/2h} e^{-iT dt/h} e^{-iV dt/2h}`.

use num_complex::Complex64;

use super::fft::GridFft;
use super::grid::Grid;
use super::state::WavefunctionState;
use crate::error::{Error, Result};
use crate::models::potential::PotentialModel;

/// `H = p^2 / 2m + V` with the same mass along every axis.
#[derive(Debug, Clone)]
pub struct Hamiltonian {
    pub potential: PotentialModel,
    pub mass: f64,
    pub hbar: f64,
}

impl Hamiltonian {
    pub fn new(potential: PotentialModel, mass: f64, hbar: f64) -> Result<Self> {
        if !(mass > 0.0) || !(hbar > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "mass and hbar must be positive, got {mass}, {hbar}"
            )));
        }
        Ok(Self {
            potential,
            mass,
            hbar,
        })
    }
}

/// Precomputed phase tables for a fixed grid, Hamiltonian and time step.
#[derive(Debug, Clone)]
pub struct SplitOperator {
    grid: Grid,
    fft: GridFft,
    dt: f64,
    hbar: f64,
    potential: Vec<f64>,
    kinetic: Vec<f64>,
    half_v: Vec<Complex64>,
    full_t: Vec<Complex64>,
    scratch: Vec<Complex64>,
}

impl SplitOperator {
    pub fn new(grid: &Grid, ham: &Hamiltonian, dt: f64) -> Result<Self> {
        if !(dt > 0.0) || !dt.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "dt must be positive, got {dt}"
            )));
        }
        let potential = ham.potential.sample(grid)?;
        let kinetic = grid.kinetic_energies(ham.mass, ham.hbar);
        let h = ham.hbar;
        let half_v = potential
            .iter()
            .map(|v| Complex64::from_polar(1.0, -v * dt / (2.0 * h)))
            .collect();
        let full_t = kinetic
            .iter()
            .map(|t| Complex64::from_polar(1.0, -t * dt / h))
            .collect();
        let fft = GridFft::new(grid);
        let scratch = fft.make_scratch();
        Ok(Self {
            grid: grid.clone(),
            fft,
            dt,
            hbar: h,
            potential,
            kinetic,
            half_v,
            full_t,
            scratch,
        })
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    pub fn hbar(&self) -> f64 {
        self.hbar
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    /// Potential sampled on the grid.
    pub fn potential(&self) -> &[f64] {
        &self.potential
    }

    /// Kinetic energy on the FFT-ordered momentum grid.
    pub fn kinetic(&self) -> &[f64] {
        &self.kinetic
    }

    pub fn fft(&self) -> &GridFft {
        &self.fft
    }

    /// Advances `state` by one step of `dt`.
    pub fn step(&mut self, state: &mut WavefunctionState) {
        debug_assert_eq!(state.amplitudes.len(), self.half_v.len());
        let psi = &mut state.amplitudes;
        mul_in_place(psi, &self.half_v);
        self.fft.forward(psi, &mut self.scratch);
        mul_in_place(psi, &self.full_t);
        self.fft.inverse(psi, &mut self.scratch);
        mul_in_place(psi, &self.half_v);
        state.time += self.dt;
    }

    /// Applies `H` to `psi` and writes the result into `out`.
    pub fn apply_hamiltonian(&mut self, psi: &[Complex64], out: &mut Vec<Complex64>) {
        out.clear();
        out.extend_from_slice(psi);
        self.fft.forward(out, &mut self.scratch);
        for (o, t) in out.iter_mut().zip(&self.kinetic) {
            *o *= t;
        }
        self.fft.inverse(out, &mut self.scratch);
        for ((o, p), v) in out.iter_mut().zip(psi).zip(&self.potential) {
            *o += p * v;
        }
    }
}

#[inline]
fn mul_in_place(a: &mut [Complex64], b: &[Complex64]) {
    for (x, y) in a.iter_mut().zip(b) {
        *x *= y;
    }
}

/// One-off unitary step. Prefer [`SplitOperator`] in loops.
pub fn split_step_unitary(
    state: &WavefunctionState,
    ham: &Hamiltonian,
    dt: f64,
) -> Result<WavefunctionState> {
    let mut op = SplitOperator::new(&state.grid, ham, dt)?;
    let mut out = state.clone();
    op.step(&mut out);
    Ok(out)
}
