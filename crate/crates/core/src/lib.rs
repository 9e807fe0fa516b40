//! Wavepacket and classical-ensemble scattering with Caldeira-Leggett
//! decoherence.
//!
//! * [`qdyn`]: grids, split-operator propagation, observables, masks, flux.
//! * [`models`]: barriers, Morse oscillator, 2D surfaces, transmission oracles.
//! * [`open`]: quantum state diffusion and trace identities.
//! * [`classical`]: phase-space sampling, RK4 and Langevin trajectories.
//! * [`experiments`]: presets, sweeps, dispersion series and estimates.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod classical;
pub mod error;
pub mod experiments;
pub mod models;
pub mod open;
pub mod qdyn;
pub mod units;

pub use error::{Error, Result};
