use crate::models::potential::{Potential1D, Surface};

/// One classical phase-space sample.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhasePoint<const N: usize> {
    pub q: [f64; N],
    pub p: [f64; N],
    pub weight: f64,
}

impl<const N: usize> PhasePoint<N> {
    pub fn new(q: [f64; N], p: [f64; N]) -> Self {
        Self { q, p, weight: 1.0 }
    }

    pub fn is_finite(&self) -> bool {
        self.q.iter().chain(&self.p).all(|v| v.is_finite())
    }

    pub fn kinetic(&self, mass: f64) -> f64 {
        self.p.iter().map(|p| p * p).sum::<f64>() / (2.0 * mass)
    }

    pub fn energy<F: ForceField<N> + ?Sized>(&self, field: &F, mass: f64) -> f64 {
        self.kinetic(mass) + field.potential(&self.q)
    }
}

/// Potential and gradient in `N` dimensions.
pub trait ForceField<const N: usize>: Sync {
    fn potential(&self, q: &[f64; N]) -> f64;
    fn gradient(&self, q: &[f64; N]) -> [f64; N];
}

impl<P: Potential1D + ?Sized> ForceField<1> for P {
    fn potential(&self, q: &[f64; 1]) -> f64 {
        self.value(q[0])
    }
    fn gradient(&self, q: &[f64; 1]) -> [f64; 1] {
        [self.derivative(q[0])]
    }
}

/// Adapter exposing a [`Surface`] as a 2D force field.
#[derive(Clone, Copy)]
pub struct SurfaceField<'a>(pub &'a dyn Surface);

impl ForceField<2> for SurfaceField<'_> {
    fn potential(&self, q: &[f64; 2]) -> f64 {
        self.0.value(q[0], q[1])
    }
    fn gradient(&self, q: &[f64; 2]) -> [f64; 2] {
        let (gx, gy) = self.0.gradient(q[0], q[1]);
        [gx, gy]
    }
}

/// Weighted set of phase points with its sampling provenance.
#[derive(Debug, Clone, PartialEq)]
pub struct PhaseSpaceEnsemble<const N: usize> {
    pub points: Vec<PhasePoint<N>>,
    pub time: f64,
    pub seed: u64,
    pub description: String,
}

impl<const N: usize> PhaseSpaceEnsemble<N> {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Weighted mean of `f` over the points.
    pub fn mean<G: Fn(&PhasePoint<N>) -> f64>(&self, f: G) -> f64 {
        let w: f64 = self.points.iter().map(|p| p.weight).sum();
        self.points.iter().map(|p| p.weight * f(p)).sum::<f64>() / w
    }

    /// `(<H>, delta_E)` of the ensemble.
    pub fn energy_moments<F: ForceField<N> + ?Sized>(&self, field: &F, mass: f64) -> (f64, f64) {
        let h = self.mean(|p| p.energy(field, mass));
        let h2 = self.mean(|p| p.energy(field, mass).powi(2));
        (h, (h2 - h * h).max(0.0).sqrt())
    }
}
