//! Size of a resonance feature in a transmission curve.

use super::config::Mode;
use super::sweep::SweepResult;
use crate::error::{Error, Result};

/// Fewest sweep energies a window must contain.
pub const MIN_WINDOW_POINTS: usize = 8;

const ENERGY_TOL: f64 = 1e-9;

/// Height of the largest bump of `P(E)` above its monotone baseline.
///
/// The baseline at `E` is `min P(E')` over `E' >= E`: the largest
/// nondecreasing curve below the data. The contrast is the largest excess of
/// `P` over it, so a nondecreasing curve gives 0 and a peak followed by a dip
/// gives the peak-to-dip drop. Points must be in energy order.
pub fn drawdown_contrast(points: &[(f64, f64)]) -> f64 {
    let mut floor = f64::INFINITY;
    let mut best = 0.0_f64;
    for &(_, p) in points.iter().rev() {
        floor = floor.min(p);
        best = best.max(p - floor);
    }
    best
}

/// Contrast of the `(mode, d)` curve inside `[lo, hi]`.
pub fn resonance_contrast(
    sweep: &SweepResult,
    mode: Mode,
    d: f64,
    window: (f64, f64),
) -> Result<f64> {
    let (lo, hi) = window;
    let curve = sweep.curve(mode, d);
    let (Some(first), Some(last)) = (curve.first(), curve.last()) else {
        return Err(Error::WindowOutsideSweep { lo, hi });
    };
    if !(lo <= hi) || lo < first.0 - ENERGY_TOL || hi > last.0 + ENERGY_TOL {
        return Err(Error::WindowOutsideSweep { lo, hi });
    }
    let inside: Vec<(f64, f64)> = curve
        .iter()
        .filter(|(e, _, _)| *e >= lo - ENERGY_TOL && *e <= hi + ENERGY_TOL)
        .map(|&(e, p, _)| (e, p))
        .collect();
    if inside.len() < MIN_WINDOW_POINTS {
        return Err(Error::InvalidParameter(format!(
            "window [{lo}, {hi}] holds {} sweep energies, need {MIN_WINDOW_POINTS}",
            inside.len()
        )));
    }
    Ok(drawdown_contrast(&inside))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::experiments::config::ExperimentConfig;
    use crate::experiments::sweep::{Provenance, SweepRow};

    fn sweep(ps: &[f64]) -> SweepResult {
        let rows = ps
            .iter()
            .enumerate()
            .map(|(i, &p)| SweepRow {
                energy: 2.0 + 0.1 * i as f64,
                mode: Mode::Qm,
                d: 0.0,
                probability: p,
                stderr: 0.0,
                seed: 1,
                growth_rate: None,
                de_collision: None,
                de_initial: 0.1,
            })
            .collect();
        SweepResult {
            rows,
            provenance: Provenance::of(&ExperimentConfig::default()),
        }
    }

    #[test]
    fn monotone_is_zero() {
        let s = sweep(&[0.1, 0.2, 0.2, 0.4, 0.5, 0.7, 0.8, 0.9, 0.95]);
        assert_eq!(
            resonance_contrast(&s, Mode::Qm, 0.0, (2.0, 2.8)).unwrap(),
            0.0
        );
    }

    #[test]
    fn peak_then_dip() {
        let s = sweep(&[0.5, 0.9, 0.8, 0.7, 0.65, 0.7, 0.8, 0.9, 0.95]);
        let c = resonance_contrast(&s, Mode::Qm, 0.0, (2.0, 2.8)).unwrap();
        assert!((c - 0.25).abs() < 1e-12);
        assert!(drawdown_contrast(&[(0.0, 1.0), (1.0, 0.0)]) == 1.0);
    }

    #[test]
    fn window_checks() {
        let s = sweep(&[0.5; 9]);
        assert!(matches!(
            resonance_contrast(&s, Mode::Qm, 0.0, (1.9, 2.8)),
            Err(Error::WindowOutsideSweep { .. })
        ));
        assert!(matches!(
            resonance_contrast(&s, Mode::Qm, 0.0, (2.0, 2.9)),
            Err(Error::WindowOutsideSweep { .. })
        ));
        assert!(matches!(
            resonance_contrast(&s, Mode::Qm, 0.0, (2.0, 2.5)),
            Err(Error::InvalidParameter(_))
        ));
        assert!(matches!(
            resonance_contrast(&s, Mode::Cm, 0.0, (2.0, 2.5)),
            Err(Error::WindowOutsideSweep { .. })
        ));
    }
}
