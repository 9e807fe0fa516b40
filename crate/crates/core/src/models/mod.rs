//! Potentials: `sech^2` barriers, Morse oscillator, 2D surfaces, and
//! transmission oracles.

pub mod barrier;
pub mod eigen;
pub mod morse;
pub mod nonlinearity;
pub mod potential;
pub mod surface;
pub mod transmission;

pub use barrier::{calibrate_v0, Barrier1D, BarrierKind};
pub use eigen::{grid_eigenstates, Eigenstates};
pub use morse::MorseOscillator;
pub use nonlinearity::{nonlinearity_length, nonlinearity_report, NonlinearityReport};
pub use potential::{FreeSpace, Harmonic, Potential1D, PotentialModel, Surface};
pub use surface::{model_surface_2d, ModelSurface, SurfaceRegistry};
pub use transmission::{
    analytic_transmission, packet_averaged_transmission, stationary_transmission,
};
