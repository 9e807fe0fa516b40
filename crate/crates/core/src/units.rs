//! Physical constants and atomic-unit conversions.

pub const BOLTZMANN: f64 = 1.380649e-23;
pub const HBAR_SI: f64 = 1.054571817e-34;
pub const HARTREE_EV: f64 = 27.211386245988;
pub const HARTREE_INV_CM: f64 = 219474.6313632;
pub const HARTREE_J: f64 = 4.3597447222071e-18;
pub const BOHR_M: f64 = 5.29177210903e-11;
pub const ELECTRON_MASS_KG: f64 = 9.1093837015e-31;
pub const PROTON_MASS_AU: f64 = 1836.15267343;
/// Mass of a hydrogen atom.
pub const HYDROGEN_MASS_KG: f64 = 1.6735575e-27;
/// Atomic time unit per femtosecond.
pub const AU_PER_FS: f64 = 41.341373335;

pub fn hydrogen_mass_au() -> f64 {
    HYDROGEN_MASS_KG / ELECTRON_MASS_KG
}

/// Reduced mass for collinear mass-scaled Jacobi coordinates,
/// `sqrt(m1 m2 m3 / (m1 + m2 + m3))`.
pub fn three_body_reduced_mass(m1: f64, m2: f64, m3: f64) -> f64 {
    (m1 * m2 * m3 / (m1 + m2 + m3)).sqrt()
}

pub fn ev_to_hartree(e: f64) -> f64 {
    e / HARTREE_EV
}

pub fn fs_to_au(t: f64) -> f64 {
    t * AU_PER_FS
}

/// Atomic unit of the momentum-diffusion constant `D`, `p_au^2 / t_au`, in kg J / s.
pub fn diffusion_au_si() -> f64 {
    let t_au = HBAR_SI / HARTREE_J;
    let p_au = HBAR_SI / BOHR_M;
    p_au * p_au / t_au
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hydrogen_reduced_mass() {
        let m = hydrogen_mass_au();
        let mu = three_body_reduced_mass(m, m, m);
        assert!((mu - 1060.6).abs() < 0.5, "{mu}");
        assert!((mu - m / 3f64.sqrt()).abs() < 1e-9);
    }

    #[test]
    fn diffusion_unit() {
        let d = diffusion_au_si();
        assert!((d / 1.6418e-31 - 1.0).abs() < 1e-3, "{d}");
    }
}
