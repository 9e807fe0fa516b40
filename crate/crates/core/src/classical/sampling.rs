//! Initial classical ensembles: Wigner Gaussian for translation, Morse energy
//! shell for vibration.

use rand::Rng;
use rand_distr::{Distribution, Normal, StandardNormal};

use super::phase::{PhasePoint, PhaseSpaceEnsemble};
use crate::error::{Error, Result};
use crate::models::morse::MorseOscillator;
use crate::models::potential::Potential1D;
use crate::open::wiener::realization_rng;
use crate::qdyn::packet::GaussianPacketSpec;

/// Draws `n` points from the Wigner function of the packet: independent
/// normals with `sigma_x = gamma`, `sigma_p = hbar / 2 gamma`.
pub fn sample_wigner_gaussian(
    spec: &GaussianPacketSpec,
    hbar: f64,
    n: usize,
    seed: u64,
) -> PhaseSpaceEnsemble<1> {
    let mut rng = realization_rng(seed, u64::MAX);
    let sx = spec.gamma;
    let sp = spec.sigma_p(hbar);
    let points = (0..n)
        .map(|_| {
            let zx: f64 = rng.sample(StandardNormal);
            let zp: f64 = rng.sample(StandardNormal);
            PhasePoint::new([spec.x0 + sx * zx], [spec.p0 + sp * zp])
        })
        .collect();
    PhaseSpaceEnsemble {
        points,
        time: 0.0,
        seed,
        description: format!(
            "wigner gaussian gamma={} x0={} p0={}",
            spec.gamma, spec.x0, spec.p0
        ),
    }
}

/// `n` points on the Morse orbit of energy `e_v`, uniform in the orbit's
/// time phase. Each point has energy `e_v` up to rounding.
pub fn sample_morse_shell<R: Rng + ?Sized>(
    morse: &MorseOscillator,
    e_v: f64,
    n: usize,
    rng: &mut R,
) -> Result<Vec<(f64, f64)>> {
    if !(e_v > 0.0 && e_v < morse.d_e) {
        return Err(Error::EnergyOutOfRange {
            energy: e_v,
            depth: morse.d_e,
        });
    }
    let eps = (e_v / morse.d_e).sqrt();
    Ok((0..n)
        .map(|_| {
            let theta = std::f64::consts::TAU * rng.random::<f64>();
            morse_orbit_point(morse, e_v, eps, theta)
        })
        .collect())
}

/// Point at phase `theta` of the orbit `y = r_e + ln((1 - eps cos theta) / (1 - eps^2)) / a`.
fn morse_orbit_point(morse: &MorseOscillator, e_v: f64, eps: f64, theta: f64) -> (f64, f64) {
    let y = morse.r_e + ((1.0 - eps * theta.cos()) / (1.0 - eps * eps)).ln() / morse.a;
    let ke = (e_v - morse.value(y)).max(0.0);
    let p = theta.sin().signum() * (2.0 * morse.mass * ke).sqrt();
    (y, p)
}

/// How the vibrational coordinate of a 2D ensemble is drawn.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum VibrationalSampling {
    /// Fixed vibrational energy on the Morse shell.
    Shell { e_v: f64 },
    /// Gaussian Wigner function of the harmonic approximation to the ground state.
    Wigner,
}

/// Product ensemble: Wigner translation along `x`, vibration along `y`.
pub fn sample_product_ensemble(
    spec: &GaussianPacketSpec,
    morse: &MorseOscillator,
    vib: VibrationalSampling,
    hbar: f64,
    n: usize,
    seed: u64,
) -> Result<PhaseSpaceEnsemble<2>> {
    let trans = sample_wigner_gaussian(spec, hbar, n, seed);
    let mut rng = realization_rng(seed, u64::MAX - 1);
    let ys: Vec<(f64, f64)> = match vib {
        VibrationalSampling::Shell { e_v } => sample_morse_shell(morse, e_v, n, &mut rng)?,
        VibrationalSampling::Wigner => {
            let sy = (hbar / (2.0 * morse.mass * morse.omega())).sqrt();
            let sp = hbar / (2.0 * sy);
            let ny = Normal::new(morse.r_e, sy).expect("positive width");
            let np = Normal::new(0.0, sp).expect("positive width");
            (0..n)
                .map(|_| (ny.sample(&mut rng), np.sample(&mut rng)))
                .collect()
        }
    };
    let points = trans
        .points
        .iter()
        .zip(ys)
        .map(|(t, (y, py))| PhasePoint::new([t.q[0], y], [t.p[0], py]))
        .collect();
    Ok(PhaseSpaceEnsemble {
        points,
        time: 0.0,
        seed,
        description: format!("{} x {:?}", trans.description, vib),
    })
}
