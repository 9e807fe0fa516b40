//! Classical trajectory ensembles under Hamiltonian and Langevin dynamics.

pub mod dynamics;
pub mod phase;
pub mod sampling;

pub use dynamics::{
    count_reactive, langevin_step, rk4_step, run_trajectories, ClassicalMoments, Exit, Threshold,
    TrajectoryOutcome, TrajectoryRun,
};
pub use phase::{ForceField, PhasePoint, PhaseSpaceEnsemble, SurfaceField};
pub use sampling::{
    sample_morse_shell, sample_product_ensemble, sample_wigner_gaussian, VibrationalSampling,
};
