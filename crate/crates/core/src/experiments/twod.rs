//! Collinear atom-diatom scattering on a two-dimensional surface: quantum
//! reaction probability from the flux through `y = y_I`, and the matched
//! classical ensemble counted at a product-channel line.

use crate::classical::{
    run_trajectories, sample_product_ensemble, ClassicalMoments, Exit, PhaseSpaceEnsemble,
    SurfaceField, Threshold, TrajectoryRun, VibrationalSampling,
};
use crate::error::{Error, Result};
use crate::models::eigen::grid_eigenstates;
use crate::models::potential::PotentialModel;
use crate::models::surface::{ModelSurface, SurfaceRegistry};
use crate::open::{
    run_qsd_ensemble, DecoherenceSpec, Divider, Estimate, FluxProbe, Probes, RealizationRecord,
};
use crate::qdyn::{
    build_gaussian, expectation_moments, gamma_for_dispersion, Axis, Channel, Derivative,
    DispersionForm, GaussianPacketSpec, Grid, Hamiltonian, MaskEdge, MaskSpec, Moments, Side,
    WavefunctionState,
};
use crate::units;

/// Scattering set-up in atomic units. Times are stored in atomic units.
#[derive(Debug, Clone)]
pub struct Scenario2D {
    pub surface: ModelSurface,
    pub mass: f64,
    pub x_min: f64,
    pub y_min: f64,
    pub dx: f64,
    pub dy: f64,
    pub ny: usize,
    pub x0: f64,
    pub gamma: f64,
    pub y_flux: f64,
    pub y_classical: f64,
    /// Inner edge of the product absorbing zone.
    pub y_mask: f64,
    /// Reactant zone width beyond the packet region along `x`.
    pub x_mask_width: f64,
    pub dt_qm: f64,
    pub dt_cm: f64,
    pub t_f: f64,
    pub t_f_classical: f64,
}

/// Energy-dependent pieces of a 2D run.
#[derive(Debug, Clone)]
pub struct Setup2D {
    /// Total energy in hartree.
    pub energy: f64,
    pub e_vib: f64,
    pub packet: GaussianPacketSpec,
    pub grid: Grid,
    pub mask: MaskSpec,
    pub vibration: Vec<f64>,
    /// Inner edge of the reactant absorbing zone.
    pub x_interior: f64,
    /// Time at which the packet centre reaches the diatom bond length in
    /// free flight.
    pub arrival_time: f64,
}

#[derive(Debug, Clone)]
pub struct QuantumRun2D {
    /// Time-integrated flux through `y = y_I`.
    pub flux: Estimate,
    /// Norm beyond `y_I` plus absorbed product norm at the end.
    pub direct: Estimate,
    pub initial: Moments,
    pub records: Vec<RealizationRecord>,
}

#[derive(Debug, Clone)]
pub struct ClassicalRun2D {
    pub reaction: Estimate,
    pub initial_delta_e: f64,
    pub moments: Vec<ClassicalMoments>,
}

/// QMD time step: 0.073 fs up to this `D` (kg J/s), 0.012 fs above.
pub const QMD_SMALL_D_LIMIT: f64 = 1e-34;

impl Scenario2D {
    /// Grid origin, spacings, `y_I` and time steps of the collinear H + H2
    /// runs, with the model surface in place of the ab initio one. The packet
    /// starts at `x0 = 35`, where its tail no longer samples the interaction
    /// region and its energy width equals the asymptotic value.
    pub fn model(surface_name: &str) -> Result<Self> {
        let mass = units::three_body_reduced_mass(
            units::hydrogen_mass_au(),
            units::hydrogen_mass_au(),
            units::hydrogen_mass_au(),
        );
        let registry = SurfaceRegistry::with_builtin();
        let s = registry.get(surface_name)?;
        if s.name() != "model-2d" {
            return Err(Error::Unsupported(format!(
                "surface '{surface_name}' has no vibrational sampler; only model-2d runs end to end"
            )));
        }
        Ok(Self {
            surface: ModelSurface::default_h3(mass),
            mass,
            x_min: 0.90,
            y_min: 0.38,
            dx: 0.15,
            dy: 0.12,
            ny: 64,
            x0: 35.0,
            gamma: 5.9,
            y_flux: 3.02,
            y_classical: 5.0,
            y_mask: 5.5,
            x_mask_width: 8.0,
            dt_qm: units::fs_to_au(0.14),
            dt_cm: units::fs_to_au(0.02),
            t_f: units::fs_to_au(287.0),
            t_f_classical: units::fs_to_au(290.0),
        })
    }

    /// Default QMD step for decoherence `d_si` in kg J/s.
    pub fn dt_qmd(d_si: f64) -> f64 {
        units::fs_to_au(if d_si <= QMD_SMALL_D_LIMIT {
            0.073
        } else {
            0.012
        })
    }

    pub fn hamiltonian(&self) -> Result<Hamiltonian> {
        Hamiltonian::new(PotentialModel::two_d(self.surface.clone()), self.mass, 1.0)
    }

    fn y_axis(&self) -> Result<Axis> {
        Axis::new(self.y_min, self.dy, self.ny)
    }

    /// Vibrational ground state of the reactant valley on the y axis.
    pub fn vibrational_ground_state(&self) -> Result<(f64, Vec<f64>)> {
        let ay = self.y_axis()?;
        let cut: Vec<f64> = ay
            .positions()
            .iter()
            .map(|&y| self.surface.asymptotic_cut(y))
            .collect();
        let eig = grid_eigenstates(&ay, &cut, self.mass, 1.0, 1);
        Ok((eig.energies[0], eig.vectors[0].clone()))
    }

    /// Set-up for total energy `e` in hartree.
    pub fn setup(&self, e: f64) -> Result<Setup2D> {
        let (e_vib, vibration) = self.vibrational_ground_state()?;
        let packet = GaussianPacketSpec::from_translational_energy(
            self.gamma, self.x0, e, e_vib, self.mass, -1.0,
        )?;
        let x_interior = self.x0 + 5.0 * self.gamma;
        let ax = Axis::covering(self.x_min, x_interior + self.x_mask_width, self.dx)?;
        // keep the requested origin; covering centres the interval
        let ax = Axis::new(self.x_min, self.dx, ax.n)?;
        let grid = Grid::two_d(ax, self.y_axis()?);
        let mask = MaskSpec {
            edges: vec![
                MaskEdge {
                    axis: 0,
                    side: Side::High,
                    width: ax.x_max() + ax.dx - x_interior,
                    channel: Channel::Reactant,
                },
                MaskEdge {
                    axis: 1,
                    side: Side::High,
                    width: grid.axis(1).x_max() + self.dy - self.y_mask,
                    channel: Channel::Product,
                },
            ],
        };
        let arrival_time = (self.x0 - self.surface.morse.r_e) * self.mass / packet.p0.abs();
        Ok(Setup2D {
            energy: e,
            e_vib,
            packet,
            grid,
            mask,
            vibration,
            x_interior,
            arrival_time,
        })
    }

    pub fn initial_state(&self, setup: &Setup2D) -> Result<WavefunctionState> {
        build_gaussian(&setup.grid, &setup.packet, 1.0, Some(&setup.vibration))
    }

    /// Energy width of the initial packet from the translational formula.
    pub fn packet_dispersion(&self, setup: &Setup2D) -> Result<f64> {
        crate::qdyn::initial_packet_dispersion(
            self.gamma,
            setup.energy,
            self.mass,
            1.0,
            DispersionForm::Translational { e_vib: setup.e_vib },
        )
    }

    /// Width giving energy spread `delta_e` (hartree) at total energy `e`.
    pub fn gamma_for(&self, delta_e: f64, e: f64) -> Result<f64> {
        let (e_vib, _) = self.vibrational_ground_state()?;
        gamma_for_dispersion(
            delta_e,
            e,
            self.mass,
            1.0,
            DispersionForm::Translational { e_vib },
        )
    }

    /// Quantum reaction probability with decoherence `d_au` (atomic units).
    pub fn quantum(&self, e: f64, d_au: f64, dt: f64, n: usize, seed: u64) -> Result<QuantumRun2D> {
        let setup = self.setup(e)?;
        let ham = self.hamiltonian()?;
        let initial = self.initial_state(&setup)?;
        let dec = if d_au > 0.0 {
            DecoherenceSpec::all_axes(d_au, 2)?
        } else {
            DecoherenceSpec::closed()
        };
        let n = if dec.is_closed() { 1 } else { n.max(1) };
        let probes = Probes {
            mask: Some(setup.mask.clone()),
            divider: Some(Divider {
                axis: 1,
                threshold: self.y_flux,
            }),
            flux: Some(FluxProbe {
                y: self.y_flux,
                method: Derivative::Spectral,
            }),
            moment_every: None,
            stop: None,
        };
        let n_steps = (self.t_f / dt).round() as usize;
        let acc = run_qsd_ensemble(&initial, &ham, &dec, dt, n_steps, n, seed, &probes)?;
        let missing = || Error::InvalidParameter("no realizations".into());
        Ok(QuantumRun2D {
            flux: acc.flux_probability().ok_or_else(missing)?,
            direct: acc.transmission().ok_or_else(missing)?,
            initial: expectation_moments(&initial, &ham)?,
            records: acc.records,
        })
    }

    /// Wigner translation times Morse shell at the quantum vibrational energy.
    pub fn classical_ensemble(
        &self,
        setup: &Setup2D,
        n: usize,
        seed: u64,
    ) -> Result<PhaseSpaceEnsemble<2>> {
        sample_product_ensemble(
            &setup.packet,
            &self.surface.morse,
            VibrationalSampling::Shell { e_v: setup.e_vib },
            1.0,
            n,
            seed,
        )
    }

    /// Classical reaction probability: trajectories crossing `y_classical`
    /// before `t_f_classical`.
    pub fn classical(
        &self,
        e: f64,
        d_au: f64,
        dt: f64,
        n: usize,
        seed: u64,
        moment_every: Option<f64>,
        moment_until: Option<f64>,
    ) -> Result<ClassicalRun2D> {
        if n == 0 {
            return Err(Error::InvalidParameter(
                "classical ensemble needs at least one trajectory".into(),
            ));
        }
        let setup = self.setup(e)?;
        let ensemble = self.classical_ensemble(&setup, n, seed)?;
        let field = SurfaceField(&self.surface);
        let run = TrajectoryRun {
            mass: self.mass,
            dt,
            n_steps: (self.t_f_classical / dt).round() as usize,
            d: d_au,
            master_seed: seed,
            divider: Some(Threshold {
                axis: 1,
                threshold: self.y_classical,
            }),
            reactant_exit: Some(Exit {
                axis: 0,
                bound: setup.x_interior,
                side: Side::High,
            }),
            moment_every: moment_every.map(|t| ((t / dt).round() as usize).max(1)),
            moment_until: moment_until.map(|t| (t / dt).round() as usize),
        };
        let (_, initial_delta_e) = ensemble.energy_moments(&field, self.mass);
        let out = run_trajectories(&ensemble, &field, &run);
        Ok(ClassicalRun2D {
            reaction: out.reaction_probability(),
            initial_delta_e,
            moments: out.moments,
        })
    }
}

/// Converts a sweep energy in eV to hartree.
pub fn ev(e: f64) -> f64 {
    units::ev_to_hartree(e)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_and_packet() {
        let s = Scenario2D::model("model-2d").unwrap();
        let set = s.setup(ev(0.9)).unwrap();
        assert_eq!(set.grid.axis(0).x_min, 0.90);
        assert_eq!(set.grid.axis(1).x_min, 0.38);
        assert!(set.grid.axis(0).n.is_power_of_two());
        assert!(set.packet.p0 < 0.0);
        let (ev0, _) = s.vibrational_ground_state().unwrap();
        let analytic = s.surface.morse.level_energy(0, 1.0);
        assert!((ev0 / analytic - 1.0).abs() < 1e-3, "{ev0} {analytic}");
        assert!(s.initial_state(&set).is_ok());
    }

    #[test]
    fn verbatim_start_is_too_close_to_the_edge() {
        let mut s = Scenario2D::model("model-2d").unwrap();
        s.x0 = 30.0;
        let set = s.setup(ev(0.9)).unwrap();
        assert!(matches!(
            s.initial_state(&set),
            Err(Error::PacketTooCloseToEdge { .. })
        ));
    }

    #[test]
    fn unknown_surface() {
        assert!(Scenario2D::model("lsth").is_err());
    }
}
