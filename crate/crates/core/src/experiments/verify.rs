//! Self-checks: the double-commutator trace identities on random densities
//! and the free-particle moment laws for both ensembles.

use crate::classical::{run_trajectories, sample_wigner_gaussian, TrajectoryRun};
use crate::error::Result;
use crate::models::barrier::Barrier1D;
use crate::models::potential::{FreeSpace, Potential1D, PotentialModel};
use crate::open::trace::{random_density, verify_trace_identities};
use crate::open::wiener::realization_rng;
use crate::open::{run_qsd_ensemble, DecoherenceSpec, Probes};
use crate::qdyn::{build_gaussian, Axis, GaussianPacketSpec, Grid, Hamiltonian};

#[derive(Debug, Clone, PartialEq)]
pub struct TraceSuite {
    pub points: usize,
    /// Largest relative residual of the seven identities, per density.
    pub residuals: Vec<f64>,
}

impl TraceSuite {
    pub fn max_residual(&self) -> f64 {
        self.residuals.iter().copied().fold(0.0, f64::max)
    }
}

/// The identities for `densities` random mixed states on a `points`-point
/// grid with the weak-barrier potential and `hbar = 0.1`.
pub fn trace_suite(points: usize, densities: usize, seed: u64) -> Result<TraceSuite> {
    let ax = Axis::new(-8.0, 16.0 / points as f64, points)?;
    let b = Barrier1D::sbw();
    let v: Vec<f64> = ax.positions().iter().map(|&x| b.value(x)).collect();
    let mut rng = realization_rng(seed, 0);
    let residuals = (0..densities)
        .map(|_| {
            let rho = random_density(&ax, 0.1, 5, &mut rng);
            verify_trace_identities(&ax, 0.1, &v, &rho).max_relative_residual()
        })
        .collect();
    Ok(TraceSuite { points, residuals })
}

/// Free-particle ensemble settings, in the 1D units with `hbar = 0.1`.
#[derive(Debug, Clone, PartialEq)]
pub struct MomentLawSettings {
    pub d: f64,
    pub mass: f64,
    pub gamma: f64,
    pub p0: f64,
    pub dt: f64,
    pub t_f: f64,
    /// Moments are sampled this often for the `<p^2>` integral.
    pub every: f64,
    pub n_quantum: usize,
    pub n_classical: usize,
    pub seed: u64,
}

impl Default for MomentLawSettings {
    fn default() -> Self {
        Self {
            d: 0.03,
            mass: 1.0,
            gamma: 1.0,
            p0: 0.0,
            dt: 0.005,
            t_f: 0.5,
            every: 0.05,
            n_quantum: 500,
            n_classical: 10_000,
            seed: 1,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MomentLawCheck {
    pub name: &'static str,
    pub measured: f64,
    pub expected: f64,
}

impl MomentLawCheck {
    pub fn relative_error(&self) -> f64 {
        (self.measured - self.expected).abs() / self.expected.abs()
    }
}

/// Measured against predicted growth over `[0, t_f]`.
#[derive(Debug, Clone, PartialEq)]
pub struct MomentLawReport {
    /// `(<H>(t_f) - <H>(0)) / t_f` against `D / m`.
    pub classical_energy: MomentLawCheck,
    /// Increase of `delta E^2` against the integral of `2 D <p^2> / m^2`.
    pub classical_width: MomentLawCheck,
    pub quantum_energy: MomentLawCheck,
    pub quantum_width: MomentLawCheck,
}

fn trapezoid(t: &[f64], f: &[f64]) -> f64 {
    t.windows(2)
        .zip(f.windows(2))
        .map(|(t, f)| 0.5 * (t[1] - t[0]) * (f[0] + f[1]))
        .sum()
}

fn checks(
    s: &MomentLawSettings,
    t: &[f64],
    h: &[f64],
    de: &[f64],
    p2: &[f64],
) -> (MomentLawCheck, MomentLawCheck) {
    let last = t.len() - 1;
    let rate: Vec<f64> = p2
        .iter()
        .map(|p| 2.0 * s.d * p / (s.mass * s.mass))
        .collect();
    (
        MomentLawCheck {
            name: "d<H>/dt",
            measured: (h[last] - h[0]) / t[last],
            expected: s.d / s.mass,
        },
        MomentLawCheck {
            name: "dE^2 increase",
            measured: de[last].powi(2) - de[0].powi(2),
            expected: trapezoid(t, &rate),
        },
    )
}

pub fn moment_law_suite(s: &MomentLawSettings) -> Result<MomentLawReport> {
    let hbar = 0.1;
    let spec = GaussianPacketSpec::new(s.gamma, 0.0, s.p0)?;
    let every = ((s.every / s.dt).round() as usize).max(1);
    let n_steps = (s.t_f / s.dt).round() as usize;

    let ens = sample_wigner_gaussian(&spec, hbar, s.n_classical, s.seed);
    let run = TrajectoryRun {
        mass: s.mass,
        dt: s.dt,
        n_steps,
        d: s.d,
        master_seed: s.seed,
        divider: None,
        reactant_exit: None,
        moment_every: Some(every),
        moment_until: None,
    };
    let out = run_trajectories(&ens, &FreeSpace, &run);
    let m = &out.moments;
    let (classical_energy, classical_width) = checks(
        s,
        &m.iter().map(|x| x.time).collect::<Vec<_>>(),
        &m.iter().map(|x| x.mean_h.mean).collect::<Vec<_>>(),
        &m.iter().map(|x| x.delta_e).collect::<Vec<_>>(),
        &m.iter().map(|x| x.mean_p2[0]).collect::<Vec<_>>(),
    );

    // the packet spreads by about sqrt(2 D t^3 / 3) / m; 16 widths is ample
    let half = 16.0 * s.gamma + s.p0.abs() / s.mass * s.t_f;
    let grid = Grid::one_d(Axis::covering(-half, half, 0.025)?);
    let ham = Hamiltonian::new(PotentialModel::free(), s.mass, hbar)?;
    let psi = build_gaussian(&grid, &spec, hbar, None)?;
    let dec = DecoherenceSpec::all_axes(s.d, 1)?;
    let probes = Probes {
        moment_every: Some(every),
        ..Default::default()
    };
    let acc = run_qsd_ensemble(
        &psi,
        &ham,
        &dec,
        s.dt,
        n_steps,
        s.n_quantum,
        s.seed,
        &probes,
    )?;
    let m = acc.moment_series();
    let (quantum_energy, quantum_width) = checks(
        s,
        &m.iter().map(|x| x.time).collect::<Vec<_>>(),
        &m.iter().map(|x| x.mean_h.mean).collect::<Vec<_>>(),
        &m.iter().map(|x| x.delta_e).collect::<Vec<_>>(),
        &m.iter().map(|x| x.mean_p2[0]).collect::<Vec<_>>(),
    );
    Ok(MomentLawReport {
        classical_energy,
        classical_width,
        quantum_energy,
        quantum_width,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trace_residuals_small() {
        let t = trace_suite(64, 3, 7).unwrap();
        assert_eq!(t.residuals.len(), 3);
        assert!(t.max_residual() < 1e-8, "{t:?}");
    }

    #[test]
    fn trapezoid_exact_for_lines() {
        assert!((trapezoid(&[0.0, 1.0, 3.0], &[1.0, 2.0, 4.0]) - 7.5).abs() < 1e-15);
    }

    #[test]
    fn small_moment_run() {
        let s = MomentLawSettings {
            n_quantum: 8,
            n_classical: 500,
            t_f: 0.2,
            ..Default::default()
        };
        let r = moment_law_suite(&s).unwrap();
        assert_eq!(r.classical_energy.expected, 0.03);
        assert!(r.classical_energy.relative_error() < 0.2, "{r:?}");
        assert!(r.quantum_width.measured > 0.0);
    }
}
