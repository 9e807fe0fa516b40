use super::potential::Potential1D;
use crate::error::{Error, Result};

/// `V(y) = D_e (1 - e^{-a (y - r_e)})^2`, zero at the well bottom.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MorseOscillator {
    pub d_e: f64,
    pub a: f64,
    pub r_e: f64,
    pub mass: f64,
}

impl MorseOscillator {
    /// H2 in atomic units (D_e = 4.7446 eV, omega_e = 4401.2 cm^-1, r_e = 1.401 bohr),
    /// with the supplied vibrational mass.
    pub fn h2(mass: f64) -> Self {
        let d_e = 4.7446 / crate::units::HARTREE_EV;
        let omega = 4401.213 / crate::units::HARTREE_INV_CM;
        // omega = a sqrt(2 D_e / m_red) with m_red the H2 reduced mass
        let m_red = 0.5 * crate::units::PROTON_MASS_AU * 1.007825 / 1.007276;
        let a = omega * (m_red / (2.0 * d_e)).sqrt();
        Self {
            d_e,
            a,
            r_e: 1.401,
            mass,
        }
    }

    pub fn omega(&self) -> f64 {
        self.a * (2.0 * self.d_e / self.mass).sqrt()
    }

    /// `hbar omega (v + 1/2) - [hbar omega (v + 1/2)]^2 / 4 D_e`.
    pub fn level_energy(&self, v: u32, hbar: f64) -> f64 {
        let x = hbar * self.omega() * (v as f64 + 0.5);
        x - x * x / (4.0 * self.d_e)
    }

    /// Classical turning points at energy `e`.
    pub fn turning_points(&self, e: f64) -> Result<(f64, f64)> {
        if !(e > 0.0 && e < self.d_e) {
            return Err(Error::EnergyOutOfRange {
                energy: e,
                depth: self.d_e,
            });
        }
        let s = (e / self.d_e).sqrt();
        Ok((
            self.r_e - (1.0 + s).ln() / self.a,
            self.r_e - (1.0 - s).ln() / self.a,
        ))
    }
}

impl Potential1D for MorseOscillator {
    fn value(&self, y: f64) -> f64 {
        let q = 1.0 - (-self.a * (y - self.r_e)).exp();
        self.d_e * q * q
    }

    fn derivative(&self, y: f64) -> f64 {
        let e = (-self.a * (y - self.r_e)).exp();
        2.0 * self.d_e * self.a * (1.0 - e) * e
    }
}
