//! Quantum state diffusion for position couplings `L_m = sqrt(D) q_m / hbar`.
//!
//! A step is `S(dt/2) U(dt) S(dt/2)` where `U` is the Strang split-operator step
//! and `S` the stochastic factor. Because each `L_m` is diagonal in position,
//! the Ito exponential for frozen `<q_m>` is exact:
//!
//! `psi <- psi exp(-c u^2 h + sqrt(2c) u dw)`, `u = q - <q>`, `c = D / hbar^2`,
//!
//! with `E|dw|^2 = h` for a substep of length `h`. The mean `<q>` is taken at
//! the midpoint of the substep (predictor-corrector), and the state is rescaled
//! to its norm before the substep, so absorbed probability is not restored.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::qdyn::grid::Grid;
use crate::qdyn::propagator::{Hamiltonian, SplitOperator};
use crate::qdyn::state::WavefunctionState;

use super::wiener::WienerIncrement;

/// Relative norm change of one stochastic substep beyond which the step is rejected.
pub const NORM_GUARD: f64 = 0.05;

#[derive(Debug, Clone, PartialEq)]
pub struct DecoherenceSpec {
    /// Momentum-diffusion constant, `d<p^2>/dt = 2D` per coupled coordinate.
    pub d: f64,
    /// Grid axes coupled to the environment.
    pub axes: Vec<usize>,
}

impl DecoherenceSpec {
    pub fn closed() -> Self {
        Self {
            d: 0.0,
            axes: Vec::new(),
        }
    }

    pub fn new(d: f64, axes: Vec<usize>) -> Result<Self> {
        if !(d >= 0.0) || !d.is_finite() {
            return Err(Error::InvalidParameter(format!("D must be >= 0, got {d}")));
        }
        Ok(Self { d, axes })
    }

    /// Couples every axis of a `dims`-dimensional grid.
    pub fn all_axes(d: f64, dims: usize) -> Result<Self> {
        Self::new(d, (0..dims).collect())
    }

    pub fn is_closed(&self) -> bool {
        self.d == 0.0 || self.axes.is_empty()
    }

    pub fn couplings(&self) -> usize {
        self.axes.len()
    }
}

/// `out[j] = exp(a x_j^2 + b x_j)` with `x_j = x0 + j h`, by a product
/// recurrence resynchronised every 32 points.
fn quadratic_exp_line(x0: f64, h: f64, a: f64, b: Complex64, out: &mut [Complex64]) {
    let exact = |x: f64| (b * x + a * x * x).exp();
    let q = Complex64::new((2.0 * a * h * h).exp(), 0.0);
    let mut j = 0;
    while j < out.len() {
        let x = x0 + j as f64 * h;
        let mut f = exact(x);
        let mut r = (b * h + a * (2.0 * x * h + h * h)).exp();
        let end = (j + 32).min(out.len());
        for o in &mut out[j..end] {
            *o = f;
            f *= r;
            r *= q;
        }
        j = end;
    }
}

/// Stateful stepper owning the unitary propagator and scratch space.
#[derive(Debug, Clone)]
pub struct QsdStepper {
    op: SplitOperator,
    dec: DecoherenceSpec,
    c: f64,
    factors: Vec<Vec<Complex64>>,
}

impl QsdStepper {
    pub fn new(grid: &Grid, ham: &Hamiltonian, dec: &DecoherenceSpec, dt: f64) -> Result<Self> {
        for &a in &dec.axes {
            if a >= grid.dims() {
                return Err(Error::InvalidParameter(format!(
                    "coupling axis {a} on a {}D grid",
                    grid.dims()
                )));
            }
        }
        let op = SplitOperator::new(grid, ham, dt)?;
        let factors = dec
            .axes
            .iter()
            .map(|&a| vec![Complex64::new(0.0, 0.0); grid.axis(a).n])
            .collect();
        Ok(Self {
            op,
            dec: dec.clone(),
            c: dec.d / (ham.hbar * ham.hbar),
            factors,
        })
    }

    pub fn dt(&self) -> f64 {
        self.op.dt()
    }

    pub fn decoherence(&self) -> &DecoherenceSpec {
        &self.dec
    }

    pub fn propagator(&mut self) -> &mut SplitOperator {
        &mut self.op
    }

    /// One full step. With `D = 0` this is exactly the unitary step.
    pub fn step(&mut self, state: &mut WavefunctionState, noise: &WienerIncrement) -> Result<()> {
        if self.dec.is_closed() {
            self.op.step(state);
            return Ok(());
        }
        self.step_full(state, noise)
    }

    /// One step through both stochastic substeps, also when `D = 0`, where
    /// they reduce to the identity up to rounding.
    pub fn step_full(
        &mut self,
        state: &mut WavefunctionState,
        noise: &WienerIncrement,
    ) -> Result<()> {
        self.stochastic_substep(state, noise, 0)?;
        self.op.step(state);
        self.stochastic_substep(state, noise, 1)
    }

    fn means(&self, state: &WavefunctionState, weights: Option<&[Vec<f64>]>) -> Vec<f64> {
        let grid = &state.grid;
        let mut sums = vec![0.0; self.dec.axes.len()];
        let mut total = 0.0;
        for (i, a) in state.amplitudes.iter().enumerate() {
            let idx = grid.unravel(i);
            let mut w = a.norm_sqr();
            if let Some(g) = weights {
                for (m, &ax) in self.dec.axes.iter().enumerate() {
                    w *= g[m][idx[ax]];
                }
            }
            total += w;
            for (m, &ax) in self.dec.axes.iter().enumerate() {
                sums[m] += w * grid.axis(ax).position(idx[ax]);
            }
        }
        sums.iter().map(|s| s / total).collect()
    }

    fn fill_factors(&mut self, grid: &Grid, means: &[f64], noise: &WienerIncrement, half: usize) {
        let h = 0.5 * self.op.dt();
        let sc = (2.0 * self.c).sqrt();
        for (m, &ax) in self.dec.axes.iter().enumerate() {
            let axis = grid.axis(ax);
            let dw = noise.halves[m][half];
            // exp(-c h (q - mu)^2 + sc (q - mu) dw), expanded about q = 0 after
            // shifting the origin to mu
            let a = -self.c * h;
            let b = sc * dw;
            quadratic_exp_line(axis.x_min - means[m], axis.dx, a, b, &mut self.factors[m]);
        }
    }

    fn stochastic_substep(
        &mut self,
        state: &mut WavefunctionState,
        noise: &WienerIncrement,
        half: usize,
    ) -> Result<()> {
        let n0 = state.norm_sq();
        if n0 == 0.0 {
            return Ok(());
        }
        let grid = state.grid.clone();
        let m0 = self.means(state, None);
        self.fill_factors(&grid, &m0, noise, half);
        let g: Vec<Vec<f64>> = self
            .factors
            .iter()
            .map(|f| f.iter().map(|z| z.norm_sqr()).collect())
            .collect();
        let m1 = self.means(state, Some(&g));
        let mid: Vec<f64> = m0.iter().zip(&m1).map(|(a, b)| 0.5 * (a + b)).collect();
        self.fill_factors(&grid, &mid, noise, half);

        match grid.dims() {
            1 => {
                for (p, f) in state.amplitudes.iter_mut().zip(&self.factors[0]) {
                    *p *= f;
                }
            }
            _ => {
                for (i, p) in state.amplitudes.iter_mut().enumerate() {
                    let idx = grid.unravel(i);
                    for (m, &ax) in self.dec.axes.iter().enumerate() {
                        *p *= self.factors[m][idx[ax]];
                    }
                }
            }
        }
        let n1 = state.norm_sq();
        let change = n1 / n0 - 1.0;
        if !change.is_finite() || change.abs() > NORM_GUARD {
            return Err(Error::StepInstability {
                time: state.time,
                change,
            });
        }
        state.renormalize_to(n0);
        Ok(())
    }
}

/// One-off QSD step.
pub fn qsd_step(
    state: &WavefunctionState,
    ham: &Hamiltonian,
    dec: &DecoherenceSpec,
    dt: f64,
    noise: &WienerIncrement,
) -> Result<WavefunctionState> {
    let mut stepper = QsdStepper::new(&state.grid, ham, dec, dt)?;
    let mut out = state.clone();
    stepper.step(&mut out, noise)?;
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::barrier::Barrier1D;
    use crate::models::potential::PotentialModel;
    use crate::open::wiener::{draw_wiener, realization_rng};
    use crate::qdyn::grid::Axis;
    use crate::qdyn::packet::{build_gaussian, GaussianPacketSpec};

    #[test]
    fn recurrence_matches_direct() {
        let mut out = vec![Complex64::new(0.0, 0.0); 1000];
        let b = Complex64::new(0.3, -1.7);
        quadratic_exp_line(-5.0, 0.01, -0.8, b, &mut out);
        for (j, o) in out.iter().enumerate() {
            let x = -5.0 + j as f64 * 0.01;
            let e = (b * x - 0.8 * x * x).exp();
            assert!((o - e).norm() < 1e-12 * e.norm().max(1.0));
        }
    }

    #[test]
    fn closed_spec_is_unitary_step() {
        let g = Grid::one_d(Axis::new(-10.0, 0.04, 512).unwrap());
        let ham = Hamiltonian::new(PotentialModel::one_d(Barrier1D::sbs()), 1.0, 0.1).unwrap();
        let s = build_gaussian(
            &g,
            &GaussianPacketSpec::new(0.5, -4.0, 2.0).unwrap(),
            0.1,
            None,
        )
        .unwrap();
        let mut op = SplitOperator::new(&g, &ham, 0.005).unwrap();
        let mut a = s.clone();
        op.step(&mut a);
        let noise = draw_wiener(&mut realization_rng(1, 0), 0.005, 1);
        let b = qsd_step(
            &s,
            &ham,
            &DecoherenceSpec::new(0.0, vec![0]).unwrap(),
            0.005,
            &noise,
        )
        .unwrap();
        assert_eq!(a.amplitudes, b.amplitudes);
    }

    #[test]
    fn open_step_keeps_norm_and_is_reproducible() {
        let g = Grid::one_d(Axis::new(-10.0, 0.04, 512).unwrap());
        let ham = Hamiltonian::new(PotentialModel::free(), 1.0, 0.1).unwrap();
        let dec = DecoherenceSpec::new(0.03, vec![0]).unwrap();
        let s0 = build_gaussian(
            &g,
            &GaussianPacketSpec::new(0.5, 0.0, 1.0).unwrap(),
            0.1,
            None,
        )
        .unwrap();
        let run = || {
            let mut st = QsdStepper::new(&g, &ham, &dec, 0.005).unwrap();
            let mut rng = realization_rng(5, 2);
            let mut s = s0.clone();
            for _ in 0..200 {
                let w = draw_wiener(&mut rng, 0.005, 1);
                st.step(&mut s, &w).unwrap();
            }
            s
        };
        let a = run();
        assert!((a.norm_sq() - 1.0).abs() < 1e-12);
        assert_eq!(a, run());
    }

    #[test]
    fn guard_trips_on_huge_steps() {
        let g = Grid::one_d(Axis::new(-10.0, 0.04, 512).unwrap());
        let ham = Hamiltonian::new(PotentialModel::free(), 1.0, 0.1).unwrap();
        let dec = DecoherenceSpec::new(50.0, vec![0]).unwrap();
        let s = build_gaussian(
            &g,
            &GaussianPacketSpec::new(1.5, 0.0, 0.0).unwrap(),
            0.1,
            None,
        )
        .unwrap();
        let mut w = WienerIncrement::zero(0.5, 1);
        w.halves[0][0] = Complex64::new(0.5, 0.0);
        assert!(matches!(
            qsd_step(&s, &ham, &dec, 0.5, &w),
            Err(Error::StepInstability { .. })
        ));
    }
}
