//! Numerical set-up of one-dimensional barrier experiments: packet placement,
//! grid, absorbing mask, measurement probes and the matched classical
//! ensemble.

use crate::classical::{
    run_trajectories, sample_wigner_gaussian, ClassicalMoments, Exit, PhaseSpaceEnsemble,
    Threshold, TrajectoryRun,
};
use crate::error::{Error, Result};
use crate::models::barrier::Barrier1D;
use crate::models::potential::PotentialModel;
use crate::open::{
    run_qsd_ensemble, DecoherenceSpec, Divider, EnsembleMoments, Estimate, Probes, StopRule,
};
use crate::qdyn::{
    build_gaussian, expectation_moments, gamma_for_dispersion, Axis, Channel, DispersionForm,
    GaussianPacketSpec, Grid, Hamiltonian, MaskEdge, MaskSpec, Moments, Side, WavefunctionState,
};

/// Barrier problem with every numerical parameter fixed.
#[derive(Debug, Clone, PartialEq)]
pub struct Scenario1D {
    pub barrier: Barrier1D,
    pub mass: f64,
    pub hbar: f64,
    /// Initial energy width of every packet.
    pub delta_e: f64,
    pub dx: f64,
    pub dt_quantum: f64,
    pub dt_classical: f64,
    /// Transmission counts everything beyond `+divider`; `[-divider, divider]`
    /// is the interaction region.
    pub divider: f64,
    /// The packet centre would reach `x = 0` at this time in free flight,
    /// unless that start is inside the interaction region.
    pub collision_time: f64,
    /// Minimum absorbing-zone width on each side; the zones take up all
    /// grid space outside the region the packets need.
    pub mask_width: f64,
    /// Interaction-region norm below which a quantum run is complete.
    pub stop_threshold: f64,
    /// Upper bound on the propagation time; derived from the packet if unset.
    pub max_time: Option<f64>,
}

/// Everything that depends on the energy of one sweep point.
#[derive(Debug, Clone)]
pub struct Setup1D {
    pub energy: f64,
    pub packet: GaussianPacketSpec,
    pub grid: Grid,
    pub mask: MaskSpec,
    /// Inner edge of the absorbing zones, `[-interior, interior]`.
    pub interior: f64,
    /// Time at which the packet centre reaches the barrier in free flight.
    pub arrival_time: f64,
    /// Time after which the incoming packet has left the approach region.
    pub min_time: f64,
    pub max_time: f64,
}

#[derive(Debug, Clone)]
pub struct QuantumRun {
    pub transmission: Estimate,
    pub initial: Moments,
    pub moments: Vec<EnsembleMoments>,
    pub final_time: f64,
}

#[derive(Debug, Clone)]
pub struct ClassicalRun {
    pub transmission: Estimate,
    pub initial_delta_e: f64,
    pub moments: Vec<ClassicalMoments>,
}

const BARRIER_TAIL: f64 = 1e-6;

impl Scenario1D {
    fn base(
        barrier: Barrier1D,
        mass: f64,
        delta_e: f64,
        dx: f64,
        dt_q: f64,
        dt_c: f64,
        t_c: f64,
    ) -> Self {
        let divider = barrier.divider(BARRIER_TAIL);
        Self {
            barrier,
            mass,
            hbar: 0.1,
            delta_e,
            dx,
            dt_quantum: dt_q,
            dt_classical: dt_c,
            divider,
            collision_time: t_c,
            mask_width: 4.0,
            stop_threshold: 1e-5,
            max_time: None,
        }
    }

    /// Weak single barrier, `alpha = 0.5`.
    pub fn sbw() -> Self {
        Self::base(Barrier1D::sbw(), 1.0, 0.04, 0.075, 0.02, 0.01, 0.0)
    }

    /// Strong single barrier, `alpha = 10`, arriving at `t = 3`.
    pub fn sbs() -> Self {
        Self::base(Barrier1D::sbs(), 1.0, 0.1, 0.05, 0.004, 0.001, 3.0)
    }

    /// Double barrier at mass `m`. The arrival time follows the resonance
    /// times 6, 8 and 9 used for masses 1, 2 and 3.
    pub fn db(mass: f64) -> Self {
        let t_r = match mass {
            m if m == 1.0 => 6.0,
            m if m == 2.0 => 8.0,
            m if m == 3.0 => 9.0,
            m => 6.0 * m.sqrt(),
        };
        Self::base(Barrier1D::db(), mass, 0.1, 0.05, 0.004, 0.001, t_r)
    }

    /// Any barrier, with the strong-barrier numerics and the packet starting
    /// just clear of the barrier.
    pub fn custom(barrier: Barrier1D) -> Self {
        Self::base(barrier, 1.0, 0.1, 0.05, 0.004, 0.001, 0.0)
    }

    pub fn hamiltonian(&self) -> Result<Hamiltonian> {
        Hamiltonian::new(PotentialModel::one_d(self.barrier), self.mass, self.hbar)
    }

    /// Packet, grid and timing for mean energy `e`.
    pub fn setup(&self, e: f64) -> Result<Setup1D> {
        let gamma = gamma_for_dispersion(
            self.delta_e,
            e,
            self.mass,
            self.hbar,
            DispersionForm::MeanEnergy,
        )?;
        let probe = GaussianPacketSpec::from_mean_energy(gamma, 0.0, e, self.mass, self.hbar, 1.0)?;
        let v = probe.p0 / self.mass;
        let start = (v * self.collision_time).max(self.divider + 5.0 * gamma);
        let packet = GaussianPacketSpec {
            x0: -start,
            ..probe
        };

        let interior = start + 6.0 * gamma;
        let half = interior + self.mask_width;
        let grid = Grid::one_d(Axis::covering(-half, half, self.dx)?);
        let width = -grid.axis(0).x_min - interior;
        let mask = MaskSpec {
            edges: vec![
                MaskEdge {
                    axis: 0,
                    side: Side::Low,
                    width,
                    channel: Channel::Reactant,
                },
                MaskEdge {
                    axis: 0,
                    side: Side::High,
                    width,
                    channel: Channel::Product,
                },
            ],
        };

        let sigma_p = packet.sigma_p(self.hbar);
        let v_slow = (packet.p0 - 4.0 * sigma_p).max(0.5 * packet.p0) / self.mass;
        let min_time = (start + self.divider + 5.0 * gamma) / v_slow;
        let max_time = self.max_time.unwrap_or(3.0 * min_time);
        Ok(Setup1D {
            energy: e,
            packet,
            grid,
            mask,
            interior,
            arrival_time: start / v,
            min_time,
            max_time,
        })
    }

    pub fn initial_state(&self, setup: &Setup1D) -> Result<WavefunctionState> {
        build_gaussian(&setup.grid, &setup.packet, self.hbar, None)
    }

    /// Quantum transmission at mean energy `e`. `d = 0` runs one
    /// deterministic realization. With `moment_every` set, ensemble moments
    /// are recorded every that many time units.
    pub fn quantum(
        &self,
        e: f64,
        d: f64,
        dt: f64,
        n: usize,
        seed: u64,
        moment_every: Option<f64>,
    ) -> Result<QuantumRun> {
        let setup = self.setup(e)?;
        let ham = self.hamiltonian()?;
        let initial = self.initial_state(&setup)?;
        let dec = if d > 0.0 {
            DecoherenceSpec::all_axes(d, 1)?
        } else {
            DecoherenceSpec::closed()
        };
        let n = if dec.is_closed() { 1 } else { n.max(1) };
        let n_steps = (setup.max_time / dt).ceil() as usize;
        let check_every = ((0.05 / dt).round() as usize).max(1);
        let probes = Probes {
            mask: Some(setup.mask.clone()),
            divider: Some(Divider {
                axis: 0,
                threshold: self.divider,
            }),
            flux: None,
            moment_every: moment_every.map(|t| ((t / dt).round() as usize).max(1)),
            stop: Some(StopRule {
                axis: 0,
                lo: -self.divider,
                hi: self.divider,
                threshold: self.stop_threshold,
                min_time: setup.min_time,
                check_every,
            }),
        };
        let acc = run_qsd_ensemble(&initial, &ham, &dec, dt, n_steps, n, seed, &probes)?;
        let transmission = acc
            .transmission()
            .ok_or_else(|| Error::InvalidParameter("no realizations".into()))?;
        let final_time = acc.records.iter().map(|r| r.final_time).fold(0.0, f64::max);
        Ok(QuantumRun {
            transmission,
            initial: expectation_moments(&initial, &ham)?,
            moments: acc.moment_series(),
            final_time,
        })
    }

    /// Wigner ensemble of the packet used at energy `e`.
    pub fn classical_ensemble(
        &self,
        setup: &Setup1D,
        n: usize,
        seed: u64,
    ) -> PhaseSpaceEnsemble<1> {
        sample_wigner_gaussian(&setup.packet, self.hbar, n, seed)
    }

    /// Classical transmission with the same packet, divider and time span.
    pub fn classical(
        &self,
        e: f64,
        d: f64,
        dt: f64,
        n: usize,
        seed: u64,
        moment_every: Option<f64>,
        moment_until: Option<f64>,
    ) -> Result<ClassicalRun> {
        if n == 0 {
            return Err(Error::InvalidParameter(
                "classical ensemble needs at least one trajectory".into(),
            ));
        }
        let setup = self.setup(e)?;
        let ensemble = self.classical_ensemble(&setup, n, seed);
        let n_steps = (setup.max_time / dt).ceil() as usize;
        let exit = -setup.interior;
        let run = TrajectoryRun {
            mass: self.mass,
            dt,
            n_steps,
            d,
            master_seed: seed,
            divider: Some(Threshold {
                axis: 0,
                threshold: self.divider,
            }),
            reactant_exit: Some(Exit {
                axis: 0,
                bound: exit,
                side: Side::Low,
            }),
            moment_every: moment_every.map(|t| ((t / dt).round() as usize).max(1)),
            moment_until: moment_until.map(|t| (t / dt).round() as usize),
        };
        let (_, initial_delta_e) = ensemble.energy_moments(&self.barrier, self.mass);
        let out = run_trajectories(&ensemble, &self.barrier, &run);
        Ok(ClassicalRun {
            transmission: out.reaction_probability(),
            initial_delta_e,
            moments: out.moments,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sbs_packet_arrives_at_three() {
        let s = Scenario1D::sbs();
        let set = s.setup(2.0).unwrap();
        assert!((set.arrival_time - 3.0).abs() < 1e-12);
        assert!((set.packet.gamma - 1.0).abs() < 0.01);
        let psi = s.initial_state(&set).unwrap();
        let m = expectation_moments(&psi, &s.hamiltonian().unwrap()).unwrap();
        assert!((m.delta_e - 0.1).abs() < 1e-3, "{}", m.delta_e);
        assert!((m.mean_h - 2.0).abs() < 1e-3, "{}", m.mean_h);
    }

    #[test]
    fn sbw_start_clears_barrier() {
        let s = Scenario1D::sbw();
        let set = s.setup(0.5).unwrap();
        assert!(set.packet.x0 + 5.0 * set.packet.gamma <= -s.divider + 1e-9);
        assert!(s.initial_state(&set).is_ok());
    }
}
