use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::qdyn::grid::Grid;

/// A one-dimensional potential with an analytic first derivative.
pub trait Potential1D: Send + Sync {
    fn value(&self, x: f64) -> f64;
    fn derivative(&self, x: f64) -> f64;
}

/// A two-dimensional potential energy surface.
///
/// Implementations must become independent of `x` for `x >= asymptotic_x()`,
/// where the surface reduces to a pure vibrational potential in `y`.
pub trait Surface: Send + Sync {
    fn name(&self) -> &str;
    /// Kinetic mass shared by both coordinates.
    fn mass(&self) -> f64;
    fn value(&self, x: f64, y: f64) -> f64;
    fn gradient(&self, x: f64, y: f64) -> (f64, f64);
    fn asymptotic_x(&self) -> f64;
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FreeSpace;

impl Potential1D for FreeSpace {
    fn value(&self, _x: f64) -> f64 {
        0.0
    }
    fn derivative(&self, _x: f64) -> f64 {
        0.0
    }
}

/// `V = k (x - centre)^2 / 2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Harmonic {
    pub stiffness: f64,
    pub centre: f64,
}

impl Potential1D for Harmonic {
    fn value(&self, x: f64) -> f64 {
        0.5 * self.stiffness * (x - self.centre).powi(2)
    }
    fn derivative(&self, x: f64) -> f64 {
        self.stiffness * (x - self.centre)
    }
}

/// Evaluatable potential used by both the quantum and classical engines.
#[derive(Clone)]
pub enum PotentialModel {
    OneD(Arc<dyn Potential1D>),
    TwoD(Arc<dyn Surface>),
}

impl fmt::Debug for PotentialModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PotentialModel::OneD(_) => f.write_str("PotentialModel::OneD(..)"),
            PotentialModel::TwoD(s) => write!(f, "PotentialModel::TwoD({})", s.name()),
        }
    }
}

impl PotentialModel {
    pub fn one_d<P: Potential1D + 'static>(p: P) -> Self {
        PotentialModel::OneD(Arc::new(p))
    }

    pub fn two_d<S: Surface + 'static>(s: S) -> Self {
        PotentialModel::TwoD(Arc::new(s))
    }

    pub fn free() -> Self {
        Self::one_d(FreeSpace)
    }

    pub fn dims(&self) -> usize {
        match self {
            PotentialModel::OneD(_) => 1,
            PotentialModel::TwoD(_) => 2,
        }
    }

    /// Potential at a point given as a coordinate slice of length `dims()`.
    pub fn value_at(&self, q: &[f64]) -> f64 {
        match self {
            PotentialModel::OneD(p) => p.value(q[0]),
            PotentialModel::TwoD(s) => s.value(q[0], q[1]),
        }
    }

    /// Potential sampled at every grid point, in storage order.
    pub fn sample(&self, grid: &Grid) -> Result<Vec<f64>> {
        if grid.dims() != self.dims() {
            return Err(Error::GridMismatch(format!(
                "{}D potential on a {}D grid",
                self.dims(),
                grid.dims()
            )));
        }
        let v: Vec<f64> = match self {
            PotentialModel::OneD(p) => grid
                .axis(0)
                .positions()
                .iter()
                .map(|&x| p.value(x))
                .collect(),
            PotentialModel::TwoD(s) => (0..grid.len())
                .map(|i| s.value(grid.coordinate(i, 0), grid.coordinate(i, 1)))
                .collect(),
        };
        if let Some(i) = v.iter().position(|x| !x.is_finite()) {
            return Err(Error::GridMismatch(format!(
                "potential not finite at grid index {i}"
            )));
        }
        Ok(v)
    }
}
