//! Experiment orchestration: barrier scenarios, energy sweeps, dispersion
//! series, washout analysis and closed-form estimates.

pub mod config;
pub mod dispersion;
pub mod estimates;
pub mod resonance;
pub mod scenario;
pub mod sweep;
pub mod twod;
pub mod verify;

pub use config::{EnergySweep, ExperimentConfig, Mode, Preset};
pub use dispersion::{dispersion_series, DispersionSeries};
pub use estimates::{
    atomic_to_si_d, estimate_d_physical, estimate_washout_d, predict_dispersion, si_to_atomic_d,
    DEstimate,
};
pub use resonance::{drawdown_contrast, resonance_contrast};
pub use scenario::{ClassicalRun, QuantumRun, Scenario1D, Setup1D};
pub use sweep::{
    config_hash, run_sweep, scenario_1d, scenario_2d, Provenance, SweepResult, SweepRow,
};
pub use twod::{ClassicalRun2D, QuantumRun2D, Scenario2D, Setup2D};
pub use verify::{moment_law_suite, trace_suite, MomentLawReport, MomentLawSettings, TraceSuite};
