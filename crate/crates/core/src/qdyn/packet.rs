//! Minimum-uncertainty Gaussian packets and their energy width.

use num_complex::Complex64;

use super::grid::Grid;
use super::state::WavefunctionState;
use crate::error::{Error, Result};

/// `F(x) = (2 pi gamma^2)^(-1/4) exp(-(x-x0)^2 / 4 gamma^2 + i p0 (x-x0) / hbar)`,
/// so the position variance is `gamma^2` and the momentum variance `hbar^2 / 4 gamma^2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussianPacketSpec {
    pub gamma: f64,
    pub x0: f64,
    pub p0: f64,
    /// Mean energy the momentum was derived from, if any.
    pub target_energy: Option<f64>,
}

/// Which energy the dispersion formula is parameterised by.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DispersionForm {
    /// `E` is the mean total energy of a free 1D packet, `<p^2>/2m`.
    MeanEnergy,
    /// `E - e_vib = p0^2 / 2m` is the translational energy of the packet centre.
    Translational { e_vib: f64 },
}

impl GaussianPacketSpec {
    pub fn new(gamma: f64, x0: f64, p0: f64) -> Result<Self> {
        if !(gamma > 0.0) || !gamma.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "gamma must be positive, got {gamma}"
            )));
        }
        Ok(Self {
            gamma,
            x0,
            p0,
            target_energy: None,
        })
    }

    /// Packet whose mean kinetic energy `<p^2>/2m` equals `energy`.
    /// `direction` picks the sign of `p0`.
    pub fn from_mean_energy(
        gamma: f64,
        x0: f64,
        energy: f64,
        mass: f64,
        hbar: f64,
        direction: f64,
    ) -> Result<Self> {
        let p0_sq = 2.0 * mass * energy - hbar * hbar / (4.0 * gamma * gamma);
        if !(p0_sq >= 0.0) {
            return Err(Error::ImaginaryMomentum { energy, gamma });
        }
        let mut s = Self::new(gamma, x0, direction.signum() * p0_sq.sqrt())?;
        s.target_energy = Some(energy);
        Ok(s)
    }

    /// Packet whose centre carries translational energy `energy - e_vib`.
    pub fn from_translational_energy(
        gamma: f64,
        x0: f64,
        energy: f64,
        e_vib: f64,
        mass: f64,
        direction: f64,
    ) -> Result<Self> {
        if !(energy > e_vib) {
            return Err(Error::ImaginaryMomentum { energy, gamma });
        }
        let mut s = Self::new(
            gamma,
            x0,
            direction.signum() * (2.0 * mass * (energy - e_vib)).sqrt(),
        )?;
        s.target_energy = Some(energy);
        Ok(s)
    }

    /// Momentum standard deviation hbar / 2 gamma.
    pub fn sigma_p(&self, hbar: f64) -> f64 {
        hbar / (2.0 * self.gamma)
    }

    pub fn amplitude(&self, x: f64, hbar: f64) -> Complex64 {
        let g2 = self.gamma * self.gamma;
        let norm = (2.0 * std::f64::consts::PI * g2).powf(-0.25);
        let dx = x - self.x0;
        Complex64::from_polar(norm * (-dx * dx / (4.0 * g2)).exp(), self.p0 * dx / hbar)
    }
}

/// Energy width of a Gaussian packet of width `gamma`.
pub fn initial_packet_dispersion(
    gamma: f64,
    energy: f64,
    mass: f64,
    hbar: f64,
    form: DispersionForm,
) -> Result<f64> {
    let g2 = gamma * gamma;
    let quartic = hbar.powi(4) / (32.0 * g2 * g2 * mass * mass);
    match form {
        DispersionForm::MeanEnergy => {
            if 2.0 * mass * energy <= hbar * hbar / (4.0 * g2) {
                return Err(Error::ImaginaryMomentum { energy, gamma });
            }
            Ok((hbar * hbar * energy / (2.0 * g2 * mass) - quartic)
                .max(0.0)
                .sqrt())
        }
        DispersionForm::Translational { e_vib } => {
            if !(energy > e_vib) {
                return Err(Error::ImaginaryMomentum { energy, gamma });
            }
            Ok((quartic + hbar * hbar * (energy - e_vib) / (2.0 * g2 * mass)).sqrt())
        }
    }
}

/// Inverse of [`initial_packet_dispersion`]: the width giving energy spread
/// `delta_e`. For the mean-energy form the wider of the two solutions is returned.
pub fn gamma_for_dispersion(
    delta_e: f64,
    energy: f64,
    mass: f64,
    hbar: f64,
    form: DispersionForm,
) -> Result<f64> {
    if !(delta_e > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "delta_e must be positive, got {delta_e}"
        )));
    }
    // delta_e^2 = b u +/- a u^2 with u = 1 / gamma^2
    let a = hbar.powi(4) / (32.0 * mass * mass);
    let u = match form {
        DispersionForm::MeanEnergy => {
            let b = hbar * hbar * energy / (2.0 * mass);
            let disc = b * b - 4.0 * a * delta_e * delta_e;
            if disc < 0.0 {
                return Err(Error::InvalidParameter(format!(
                    "energy width {delta_e} unreachable at mean energy {energy}"
                )));
            }
            2.0 * delta_e * delta_e / (b + disc.sqrt())
        }
        DispersionForm::Translational { e_vib } => {
            let b = hbar * hbar * (energy - e_vib) / (2.0 * mass);
            if !(b > 0.0) {
                return Err(Error::ImaginaryMomentum {
                    energy,
                    gamma: f64::NAN,
                });
            }
            2.0 * delta_e * delta_e / (b + (b * b + 4.0 * a * delta_e * delta_e).sqrt())
        }
    };
    Ok(1.0 / u.sqrt())
}

/// Product state `F(x) phi(y)` (or `F(x)` in 1D), normalised on the grid.
///
/// `vib` holds the vibrational factor sampled on the y axis.
pub fn build_gaussian(
    grid: &Grid,
    spec: &GaussianPacketSpec,
    hbar: f64,
    vib: Option<&[f64]>,
) -> Result<WavefunctionState> {
    let ax = grid.axis(0);
    let margin = (spec.x0 - ax.x_min).min(ax.x_max() - spec.x0);
    if margin <= 5.0 * spec.gamma {
        return Err(Error::PacketTooCloseToEdge {
            x0: spec.x0,
            margin,
        });
    }
    let p_max = ax.p_max(hbar);
    if spec.p0.abs() >= 0.8 * p_max {
        return Err(Error::MomentumAliasing { p0: spec.p0, p_max });
    }
    let fx: Vec<Complex64> = ax
        .positions()
        .iter()
        .map(|&x| spec.amplitude(x, hbar))
        .collect();
    let amps = match (grid.dims(), vib) {
        (1, None) => fx,
        (2, Some(phi)) => {
            let ny = grid.axis(1).n;
            if phi.len() != ny {
                return Err(Error::GridMismatch(format!(
                    "vibrational state has {} points, y axis has {ny}",
                    phi.len()
                )));
            }
            let mut a = Vec::with_capacity(grid.len());
            for f in &fx {
                a.extend(phi.iter().map(|&p| f * p));
            }
            a
        }
        (1, Some(_)) => {
            return Err(Error::GridMismatch(
                "vibrational factor given for a 1D grid".into(),
            ))
        }
        _ => {
            return Err(Error::GridMismatch(
                "2D packet needs a vibrational factor".into(),
            ))
        }
    };
    let mut state = WavefunctionState::new(grid.clone(), amps);
    if !(state.norm_sq() > 0.0) {
        return Err(Error::InvalidParameter(
            "packet has zero norm on the grid".into(),
        ));
    }
    state.renormalize_to(1.0);
    Ok(state)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qdyn::grid::Axis;

    fn moments(s: &WavefunctionState) -> (f64, f64) {
        let xs = s.grid.axis(0).positions();
        let dx = s.grid.axis(0).dx;
        let mean: f64 = s
            .amplitudes
            .iter()
            .zip(&xs)
            .map(|(a, x)| a.norm_sqr() * x)
            .sum::<f64>()
            * dx;
        let var: f64 = s
            .amplitudes
            .iter()
            .zip(&xs)
            .map(|(a, x)| a.norm_sqr() * (x - mean).powi(2))
            .sum::<f64>()
            * dx;
        (mean, var)
    }

    #[test]
    fn constructed_moments() {
        let g = Grid::one_d(Axis::new(-20.0, 0.05, 1024).unwrap());
        let spec = GaussianPacketSpec::new(2.0, 3.0, 1.0).unwrap();
        let s = build_gaussian(&g, &spec, 0.1, None).unwrap();
        assert!((s.norm_sq() - 1.0).abs() < 1e-12);
        let (m, v) = moments(&s);
        assert!((m - 3.0).abs() < 0.05);
        assert!((v / 4.0 - 1.0).abs() < 0.02);
    }

    #[test]
    fn edge_and_aliasing_guards() {
        let g = Grid::one_d(Axis::new(0.0, 0.1, 256).unwrap());
        let close = GaussianPacketSpec::new(1.0, 4.0, 0.0).unwrap();
        assert!(matches!(
            build_gaussian(&g, &close, 0.1, None),
            Err(Error::PacketTooCloseToEdge { .. })
        ));
        let fast = GaussianPacketSpec::new(1.0, 12.8, 0.9 * g.axis(0).p_max(0.1)).unwrap();
        assert!(matches!(
            build_gaussian(&g, &fast, 0.1, None),
            Err(Error::MomentumAliasing { .. })
        ));
    }

    #[test]
    fn dispersion_limits_and_inverse() {
        let d = initial_packet_dispersion(1e6, 2.0, 1.0, 0.1, DispersionForm::MeanEnergy).unwrap();
        assert!(d < 1e-6);
        for form in [
            DispersionForm::MeanEnergy,
            DispersionForm::Translational { e_vib: 0.3 },
        ] {
            let g = gamma_for_dispersion(0.1, 2.0, 1.0, 0.1, form).unwrap();
            let back = initial_packet_dispersion(g, 2.0, 1.0, 0.1, form).unwrap();
            assert!((back - 0.1).abs() < 1e-12, "{form:?}: {back}");
        }
        assert!(matches!(
            initial_packet_dispersion(0.01, 0.1, 1.0, 0.1, DispersionForm::MeanEnergy),
            Err(Error::ImaginaryMomentum { .. })
        ));
    }

    #[test]
    fn translational_form_value() {
        // hbar = 1, mu = 1060.6, gamma = 5.9, E - Ev = 0.01838
        let d = initial_packet_dispersion(
            5.9,
            0.01838,
            1060.6,
            1.0,
            DispersionForm::Translational { e_vib: 0.0 },
        )
        .unwrap();
        assert!((d - 4.99e-4).abs() < 0.01e-4, "{d}");
    }
}
