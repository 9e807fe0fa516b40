//! Quantum state diffusion for the friction-free Caldeira-Leggett master
//! equation `d rho/dt = -i/hbar [H, rho] - D/hbar^2 sum_m [q_m, [q_m, rho]]`.

pub mod ensemble;
pub mod qsd;
pub mod trace;
pub mod wiener;

pub use ensemble::{
    run_qsd_ensemble, Divider, EnsembleAccumulator, EnsembleMoments, Estimate, FluxProbe,
    MomentSample, Probes, RealizationRecord, RealizationTemplate, StopRule,
};
pub use qsd::{qsd_step, DecoherenceSpec, QsdStepper};
pub use trace::{random_density, verify_trace_identities, TraceReport};
pub use wiener::{draw_wiener, realization_rng, WienerIncrement};
