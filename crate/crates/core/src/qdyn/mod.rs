//! Grid wavefunctions, split-operator propagation, observables, masks and flux.

pub mod fft;
pub mod flux;
pub mod grid;
pub mod mask;
pub mod observables;
pub mod packet;
pub mod propagator;
pub mod state;

pub use flux::{flux_through_line, Derivative, FluxAccumulator, FluxLine};
pub use grid::{Axis, Grid};
pub use mask::{apply_absorbing_mask, AbsorbingMask, Channel, MaskEdge, MaskSpec, Side};
pub use observables::{expectation_moments, MomentEvaluator, Moments};
pub use packet::{
    build_gaussian, gamma_for_dispersion, initial_packet_dispersion, DispersionForm,
    GaussianPacketSpec,
};
pub use propagator::{split_step_unitary, Hamiltonian, SplitOperator};
pub use state::WavefunctionState;
