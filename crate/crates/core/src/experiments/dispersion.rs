//! Time series of the ensemble energy and its width.

use super::config::{ExperimentConfig, Mode};
use super::estimates::si_to_atomic_d;
use super::sweep::{scenario_1d, scenario_2d};
use crate::error::{Error, Result};
use crate::units;

/// `<H>(t)` and `delta E(t)` on a fixed time grid. `model-2D` series are in
/// eV and fs.
#[derive(Debug, Clone, PartialEq)]
pub struct DispersionSeries {
    pub mode: Mode,
    pub d: f64,
    pub energy: f64,
    pub times: Vec<f64>,
    pub mean_h: Vec<f64>,
    pub mean_h_stderr: Vec<f64>,
    pub delta_e: Vec<f64>,
    /// `<p^2>` summed over all momentum components.
    pub mean_p2: Vec<f64>,
}

impl DispersionSeries {
    /// Energy width nearest to time `t`.
    pub fn delta_e_at(&self, t: f64) -> Option<f64> {
        self.times
            .iter()
            .zip(&self.delta_e)
            .min_by(|a, b| (a.0 - t).abs().total_cmp(&(b.0 - t).abs()))
            .map(|(_, d)| *d)
    }

    /// Largest deviation of `delta E` from its initial value.
    pub fn max_width_drift(&self) -> f64 {
        let d0 = self.delta_e.first().copied().unwrap_or(0.0);
        self.delta_e
            .iter()
            .map(|d| (d - d0).abs())
            .fold(0.0, f64::max)
    }
}

/// Records moments every `every` up to `until` (preset units) for one mode
/// at energy `e`. The quantum 2D run has absorbing boundaries, which remove
/// norm and hide the growth of `delta E`; it is rejected in favour of the
/// classical modes.
pub fn dispersion_series(
    cfg: &ExperimentConfig,
    mode: Mode,
    e: f64,
    d: f64,
    every: f64,
    until: f64,
) -> Result<DispersionSeries> {
    if !(every > 0.0 && until >= every) {
        return Err(Error::InvalidParameter(format!(
            "need 0 < every <= until, got {every}, {until}"
        )));
    }
    let d = if mode.is_open() { d } else { 0.0 };
    if cfg.preset.is_two_d() {
        if mode.is_quantum() {
            return Err(Error::Unsupported(
                "energy moments of the masked 2D quantum run; use CM or CMD for the width".into(),
            ));
        }
        let s = scenario_2d(cfg)?;
        let fs = units::fs_to_au(1.0);
        let h = units::HARTREE_EV;
        let e_au = units::ev_to_hartree(e);
        let r = s.classical(
            e_au,
            si_to_atomic_d(d),
            s.dt_cm,
            cfg.n_classical,
            cfg.seed,
            Some(every * fs),
            Some(until * fs),
        )?;
        return Ok(DispersionSeries {
            mode,
            d,
            energy: e,
            times: r.moments.iter().map(|m| m.time / fs).collect(),
            mean_h: r.moments.iter().map(|m| m.mean_h.mean * h).collect(),
            mean_h_stderr: r.moments.iter().map(|m| m.mean_h.stderr * h).collect(),
            delta_e: r.moments.iter().map(|m| m.delta_e * h).collect(),
            mean_p2: r.moments.iter().map(|m| m.mean_p2.iter().sum()).collect(),
        });
    }
    let mut s = scenario_1d(cfg)?;
    if mode.is_quantum() {
        // run to `until` regardless of where the packet is
        s.max_time = Some(until);
        s.stop_threshold = 0.0;
        let dt = if mode.is_open() {
            cfg.dt_qmd.unwrap_or(s.dt_quantum)
        } else {
            s.dt_quantum
        };
        let r = s.quantum(e, d, dt, cfg.n_quantum, cfg.seed, Some(every))?;
        Ok(DispersionSeries {
            mode,
            d,
            energy: e,
            times: r.moments.iter().map(|m| m.time).collect(),
            mean_h: r.moments.iter().map(|m| m.mean_h.mean).collect(),
            mean_h_stderr: r.moments.iter().map(|m| m.mean_h.stderr).collect(),
            delta_e: r.moments.iter().map(|m| m.delta_e).collect(),
            mean_p2: r.moments.iter().map(|m| m.mean_p2.iter().sum()).collect(),
        })
    } else {
        s.max_time = Some(until);
        let r = s.classical(
            e,
            d,
            s.dt_classical,
            cfg.n_classical,
            cfg.seed,
            Some(every),
            Some(until),
        )?;
        Ok(DispersionSeries {
            mode,
            d,
            energy: e,
            times: r.moments.iter().map(|m| m.time).collect(),
            mean_h: r.moments.iter().map(|m| m.mean_h.mean).collect(),
            mean_h_stderr: r.moments.iter().map(|m| m.mean_h.stderr).collect(),
            delta_e: r.moments.iter().map(|m| m.delta_e).collect(),
            mean_p2: r.moments.iter().map(|m| m.mean_p2.iter().sum()).collect(),
        })
    }
}
