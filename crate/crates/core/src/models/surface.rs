//! A two-channel model surface and a by-name surface registry.

use std::collections::BTreeMap;
use std::sync::Arc;

use super::morse::MorseOscillator;
use super::potential::Surface;
use crate::error::{Error, Result};

/// `V = D_e [(1 - p)^2 + (1 - q)^2 - 1] + K p q` with `p = e^{-a (x - r_e)}`,
/// `q = e^{-a (y - r_e)}`.
///
/// For large `x` this is the Morse valley `D_e (1 - q)^2` in `y` (reactant),
/// for large `y` the same valley in `x` (product). The channels meet at a
/// saddle on the diagonal whose energy is set through `K`.
#[derive(Debug, Clone, PartialEq)]
pub struct ModelSurface {
    pub morse: MorseOscillator,
    pub coupling: f64,
    /// Lowest `y` the asymptotic tolerance is guaranteed for.
    pub y_floor: f64,
    asymptotic_x: f64,
}

/// Tolerance behind [`Surface::asymptotic_x`].
pub const ASYMPTOTIC_TOLERANCE: f64 = 1e-8;

impl ModelSurface {
    /// Surface whose diagonal saddle sits `saddle_energy` above the valley floor.
    pub fn new(morse: MorseOscillator, saddle_energy: f64, y_floor: f64) -> Result<Self> {
        let v = saddle_energy / morse.d_e;
        if !(v > -1.0 && v < 1.0) {
            return Err(Error::InvalidParameter(format!(
                "saddle energy {saddle_energy} must lie within (-D_e, D_e)"
            )));
        }
        let coupling = 2.0 * morse.d_e * (1.0 + v) / (1.0 - v);
        let mut s = Self {
            morse,
            coupling,
            y_floor,
            asymptotic_x: 0.0,
        };
        // |V - V_inf| = p |D_e p - 2 D_e + K q| <= p (2 D_e + K q_max) for p <= 1
        let q_max = (-morse.a * (y_floor - morse.r_e)).exp();
        let bound = 2.0 * morse.d_e + s.coupling * q_max;
        s.asymptotic_x = morse.r_e + (bound / ASYMPTOTIC_TOLERANCE).ln() / morse.a;
        Ok(s)
    }

    /// H2 Morse valleys with a 0.42 eV saddle, valid down to `y = 0.38`.
    pub fn default_h3(mass: f64) -> Self {
        Self::new(
            MorseOscillator::h2(mass),
            crate::units::ev_to_hartree(0.42),
            0.38,
        )
        .expect("valid preset")
    }

    /// Position along the diagonal and energy of the saddle.
    pub fn saddle(&self) -> (f64, f64) {
        let d = self.morse.d_e;
        let k = self.coupling;
        let p = 2.0 * d / (2.0 * d + k);
        (
            self.morse.r_e - p.ln() / self.morse.a,
            d * (k - 2.0 * d) / (k + 2.0 * d),
        )
    }

    /// Reactant-channel vibrational potential `V(x -> inf, y)`.
    pub fn asymptotic_cut(&self, y: f64) -> f64 {
        let q = (-self.morse.a * (y - self.morse.r_e)).exp();
        self.morse.d_e * (1.0 - q) * (1.0 - q)
    }
}

impl Surface for ModelSurface {
    fn name(&self) -> &str {
        "model-2d"
    }

    fn mass(&self) -> f64 {
        self.morse.mass
    }

    fn value(&self, x: f64, y: f64) -> f64 {
        let m = &self.morse;
        let p = (-m.a * (x - m.r_e)).exp();
        let q = (-m.a * (y - m.r_e)).exp();
        m.d_e * ((1.0 - p).powi(2) + (1.0 - q).powi(2) - 1.0) + self.coupling * p * q
    }

    fn gradient(&self, x: f64, y: f64) -> (f64, f64) {
        let m = &self.morse;
        let p = (-m.a * (x - m.r_e)).exp();
        let q = (-m.a * (y - m.r_e)).exp();
        // dp/dx = -a p
        let gx = -m.a * p * (-2.0 * m.d_e * (1.0 - p) + self.coupling * q);
        let gy = -m.a * q * (-2.0 * m.d_e * (1.0 - q) + self.coupling * p);
        (gx, gy)
    }

    fn asymptotic_x(&self) -> f64 {
        self.asymptotic_x
    }
}

/// Surfaces available by name. External surfaces can be added with [`register`](Self::register).
#[derive(Clone, Default)]
pub struct SurfaceRegistry {
    surfaces: BTreeMap<String, Arc<dyn Surface>>,
}

impl std::fmt::Debug for SurfaceRegistry {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_list().entries(self.surfaces.keys()).finish()
    }
}

impl SurfaceRegistry {
    /// Registry holding the built-in model surface.
    pub fn with_builtin() -> Self {
        let mut r = Self::default();
        let mu = crate::units::three_body_reduced_mass(
            crate::units::hydrogen_mass_au(),
            crate::units::hydrogen_mass_au(),
            crate::units::hydrogen_mass_au(),
        );
        r.register(Arc::new(ModelSurface::default_h3(mu)));
        r
    }

    pub fn register(&mut self, surface: Arc<dyn Surface>) {
        self.surfaces.insert(surface.name().to_string(), surface);
    }

    pub fn get(&self, name: &str) -> Result<Arc<dyn Surface>> {
        self.surfaces
            .get(name)
            .cloned()
            .ok_or_else(|| Error::Unsupported(format!("no surface named {name:?}")))
    }

    pub fn names(&self) -> Vec<&str> {
        self.surfaces.keys().map(|s| s.as_str()).collect()
    }
}

/// Model surface as an object.
pub fn model_surface_2d() -> Arc<dyn Surface> {
    SurfaceRegistry::with_builtin()
        .get("model-2d")
        .expect("built in")
}
