//! Closed-form estimates: dispersion growth, resonance washout strength, and
//! the physical size of `D`.

use crate::units;

/// Linear-growth estimate `sqrt(4 D E0 t / m)`. It ignores the saturation of
/// the kinetic energy and therefore overestimates the width.
pub fn predict_dispersion(d: f64, e0: f64, m: f64, t: f64) -> f64 {
    (4.0 * d * e0 * t / m).max(0.0).sqrt()
}

/// Decoherence strength that makes the width reach `delta_e_r` by `t_r`:
/// `delta_e_r^2 m / (4 E0 t_R)`.
pub fn estimate_washout_d(delta_e_r: f64, m: f64, e0: f64, t_r: f64) -> f64 {
    delta_e_r * delta_e_r * m / (4.0 * e0 * t_r)
}

/// `D = 2 f m k T` in SI units together with its value in atomic units.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DEstimate {
    pub si: f64,
    pub atomic: f64,
}

pub fn estimate_d_physical(relaxation_rate: f64, mass_kg: f64, temperature: f64) -> DEstimate {
    let si = 2.0 * relaxation_rate * mass_kg * units::BOLTZMANN * temperature;
    DEstimate {
        si,
        atomic: si_to_atomic_d(si),
    }
}

/// Converts `D` from kg J / s to atomic units.
pub fn si_to_atomic_d(d_si: f64) -> f64 {
    d_si / units::diffusion_au_si()
}

pub fn atomic_to_si_d(d_au: f64) -> f64 {
    d_au * units::diffusion_au_si()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dispersion_estimate() {
        assert_eq!(predict_dispersion(0.03, 2.0, 1.0, 0.0), 0.0);
        assert_eq!(predict_dispersion(0.0, 2.0, 1.0, 3.0), 0.0);
        assert!((predict_dispersion(0.03, 2.0, 1.0, 3.0) - 0.72f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn washout_values() {
        assert_eq!(estimate_washout_d(0.0, 1.0, 2.5, 6.0), 0.0);
        assert!((estimate_washout_d(0.6, 1.0, 2.5, 6.0) - 0.006).abs() < 1e-12);
        assert!((estimate_washout_d(0.3, 3.0, 2.14, 9.0) - 0.0035).abs() < 1e-5);
    }

    #[test]
    fn physical_d() {
        let d = estimate_d_physical(1e13, units::HYDROGEN_MASS_KG, 298.0);
        assert!((d.si / 1.377e-34 - 1.0).abs() < 1e-3, "{}", d.si);
        assert_eq!(estimate_d_physical(0.0, 1.0, 300.0).si, 0.0);
        assert!((atomic_to_si_d(d.atomic) / d.si - 1.0).abs() < 1e-14);
    }
}
