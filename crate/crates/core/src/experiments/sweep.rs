//! Energy sweeps over the four dynamics modes.

use sha2::{Digest, Sha256};

use super::config::{ExperimentConfig, Mode, Preset};
use super::estimates::si_to_atomic_d;
use super::scenario::Scenario1D;
use super::twod::Scenario2D;
use crate::error::{Error, Result};
use crate::open::Estimate;
use crate::units;

/// One `(E, mode, D)` cell of a sweep. For `model-2D`, energies are in eV,
/// `D` in kg J/s and rates in eV/fs.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub energy: f64,
    pub mode: Mode,
    pub d: f64,
    pub probability: f64,
    pub stderr: f64,
    pub seed: u64,
    /// `(<H>(t_c) - <H>(0)) / t_c` with `t_c` the collision time.
    pub growth_rate: Option<f64>,
    /// Energy width at the collision time.
    pub de_collision: Option<f64>,
    /// Energy width of the initial state or ensemble.
    pub de_initial: f64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Provenance {
    pub seed: u64,
    /// SHA-256 of the canonical configuration text.
    pub config_hash: String,
    pub code_version: String,
}

impl Provenance {
    pub fn of(cfg: &ExperimentConfig) -> Self {
        Self {
            seed: cfg.seed,
            config_hash: config_hash(cfg),
            code_version: env!("CARGO_PKG_VERSION").to_string(),
        }
    }
}

/// Hex SHA-256 of [`ExperimentConfig::canonical`].
pub fn config_hash(cfg: &ExperimentConfig) -> String {
    Sha256::digest(cfg.canonical().as_bytes())
        .iter()
        .map(|b| format!("{b:02x}"))
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepResult {
    pub rows: Vec<SweepRow>,
    pub provenance: Provenance,
}

impl SweepResult {
    /// Sorts rows by mode, then energy, then `D`.
    pub fn sort(&mut self) {
        self.rows.sort_by(|a, b| {
            a.mode
                .cmp(&b.mode)
                .then(a.energy.total_cmp(&b.energy))
                .then(a.d.total_cmp(&b.d))
        });
    }

    /// `(E, P, stderr)` of one mode at one `D`, in energy order.
    pub fn curve(&self, mode: Mode, d: f64) -> Vec<(f64, f64, f64)> {
        let mut c: Vec<_> = self
            .rows
            .iter()
            .filter(|r| r.mode == mode && r.d == d)
            .map(|r| (r.energy, r.probability, r.stderr))
            .collect();
        c.sort_by(|a, b| a.0.total_cmp(&b.0));
        c
    }

    /// Largest `|P_a - P_b|` over the energies both curves share, with the
    /// combined standard error at that energy.
    pub fn max_gap(&self, a: (Mode, f64), b: (Mode, f64)) -> Option<Estimate> {
        let cb = self.curve(b.0, b.1);
        self.curve(a.0, a.1)
            .into_iter()
            .filter_map(|(e, p, s)| {
                cb.iter().find(|x| x.0 == e).map(|x| Estimate {
                    mean: (p - x.1).abs(),
                    stderr: s.hypot(x.2),
                })
            })
            .max_by(|x, y| x.mean.total_cmp(&y.mean))
    }

    /// Largest relative difference between the initial quantum and classical
    /// energy widths at a common energy.
    pub fn delta_e_mismatch(&self) -> Option<f64> {
        let mut worst: Option<f64> = None;
        for q in self.rows.iter().filter(|r| r.mode.is_quantum()) {
            for c in self
                .rows
                .iter()
                .filter(|r| !r.mode.is_quantum() && r.energy == q.energy)
            {
                let rel = (q.de_initial - c.de_initial).abs() / q.de_initial;
                worst = Some(worst.map_or(rel, |w| w.max(rel)));
            }
        }
        worst
    }
}

/// 1D scenario with the configuration's overrides applied.
pub fn scenario_1d(cfg: &ExperimentConfig) -> Result<Scenario1D> {
    let mass = cfg.mass.unwrap_or(1.0);
    let mut s = match cfg.preset {
        Preset::Sbw => Scenario1D::sbw(),
        Preset::Sbs => Scenario1D::sbs(),
        Preset::Db => Scenario1D::db(mass),
        Preset::Custom => Scenario1D::custom(cfg.barrier_1d()?),
        Preset::Model2d => return Err(Error::Unsupported("model-2D is not a 1D preset".into())),
    };
    s.mass = mass;
    if let Some(x) = cfg.delta_e {
        s.delta_e = x;
    }
    if let Some(x) = cfg.dt_qm {
        s.dt_quantum = x;
    }
    if let Some(x) = cfg.dt_cm {
        s.dt_classical = x;
    }
    if let Some(x) = cfg.dx {
        s.dx = x;
    }
    s.max_time = cfg.t_f;
    Ok(s)
}

/// 2D scenario with the configuration's overrides applied (fs and bohr).
pub fn scenario_2d(cfg: &ExperimentConfig) -> Result<Scenario2D> {
    let mut s = Scenario2D::model(&cfg.surface)?;
    if let Some(x) = cfg.dt_qm {
        s.dt_qm = units::fs_to_au(x);
    }
    if let Some(x) = cfg.dt_cm {
        s.dt_cm = units::fs_to_au(x);
    }
    if let Some(x) = cfg.t_f {
        s.t_f = units::fs_to_au(x);
    }
    if let Some(x) = cfg.t_f_classical {
        s.t_f_classical = units::fs_to_au(x);
    }
    if let Some(x) = cfg.gamma {
        s.gamma = x;
    }
    if let Some(x) = cfg.x0 {
        s.x0 = x;
    }
    if let Some(x) = cfg.y_flux {
        s.y_flux = x;
    }
    if let Some(x) = cfg.y_classical {
        s.y_classical = x;
    }
    if let Some(x) = cfg.dx {
        s.dx = x;
    }
    if let Some(x) = cfg.dy {
        s.dy = x;
    }
    if let Some(x) = cfg.x_min {
        s.x_min = x;
    }
    if let Some(x) = cfg.y_min {
        s.y_min = x;
    }
    Ok(s)
}

/// The `(mode, D)` cells requested at every energy.
fn cells(cfg: &ExperimentConfig) -> Vec<(Mode, f64)> {
    let mut out = Vec::new();
    for &m in &cfg.modes {
        if m.is_open() {
            out.extend(cfg.d.iter().map(|&d| (m, d)));
        } else {
            out.push((m, 0.0));
        }
    }
    out
}

/// Runs every requested mode at every energy. All cells share the master
/// seed, so open quantum cells at different energies see the same noise
/// streams, as do the classical cells.
pub fn run_sweep(cfg: &ExperimentConfig) -> Result<SweepResult> {
    cfg.validate()?;
    let mut rows = if cfg.preset.is_two_d() {
        sweep_2d(cfg)?
    } else {
        sweep_1d(cfg)?
    };
    for r in &rows {
        if !(-1e-9..=1.0 + 1e-9).contains(&r.probability) || !(r.stderr >= 0.0) {
            return Err(Error::InvalidParameter(format!(
                "{} at E = {}: probability {} +- {} out of range",
                r.mode, r.energy, r.probability, r.stderr
            )));
        }
    }
    // rounding can leave a probability just outside [0, 1]
    rows.iter_mut()
        .for_each(|r| r.probability = r.probability.clamp(0.0, 1.0));
    let mut res = SweepResult {
        rows,
        provenance: Provenance::of(cfg),
    };
    res.sort();
    Ok(res)
}

fn growth(t: f64, h0: f64, h1: f64) -> Option<f64> {
    (t > 0.0).then(|| (h1 - h0) / t)
}

fn sweep_1d(cfg: &ExperimentConfig) -> Result<Vec<SweepRow>> {
    let s = scenario_1d(cfg)?;
    let mut rows = Vec::new();
    for e in cfg.energies_or_default().energies() {
        let setup = s.setup(e)?;
        let t_c = setup.arrival_time;
        for (mode, d) in cells(cfg) {
            let row = |p: Estimate, g: Option<f64>, dc: Option<f64>, d0: f64| SweepRow {
                energy: e,
                mode,
                d,
                probability: p.mean,
                stderr: p.stderr,
                seed: cfg.seed,
                growth_rate: g,
                de_collision: dc,
                de_initial: d0,
            };
            if mode.is_quantum() {
                let dt = if mode.is_open() {
                    cfg.dt_qmd.unwrap_or(s.dt_quantum)
                } else {
                    s.dt_quantum
                };
                let r = s.quantum(e, d, dt, cfg.n_quantum, cfg.seed, Some(t_c))?;
                let at = r.moments.get(1);
                rows.push(row(
                    r.transmission,
                    at.and_then(|m| growth(m.time, r.moments[0].mean_h.mean, m.mean_h.mean)),
                    at.map(|m| m.delta_e),
                    r.initial.delta_e,
                ));
            } else {
                let r = s.classical(
                    e,
                    d,
                    s.dt_classical,
                    cfg.n_classical,
                    cfg.seed,
                    Some(t_c),
                    Some(t_c),
                )?;
                let at = r.moments.get(1);
                rows.push(row(
                    r.transmission,
                    at.and_then(|m| growth(m.time, r.moments[0].mean_h.mean, m.mean_h.mean)),
                    at.map(|m| m.delta_e),
                    r.initial_delta_e,
                ));
            }
        }
    }
    Ok(rows)
}

fn sweep_2d(cfg: &ExperimentConfig) -> Result<Vec<SweepRow>> {
    let base = scenario_2d(cfg)?;
    let h = units::HARTREE_EV;
    let fs = units::fs_to_au(1.0);
    let mut rows = Vec::new();
    for e_ev in cfg.energies_or_default().energies() {
        let e = units::ev_to_hartree(e_ev);
        let mut s = base.clone();
        if let Some(de) = cfg.delta_e {
            s.gamma = s.gamma_for(units::ev_to_hartree(de), e)?;
        }
        let setup = s.setup(e)?;
        let t_c = setup.arrival_time;
        for (mode, d_si) in cells(cfg) {
            let d = si_to_atomic_d(d_si);
            let row = |p: Estimate, g: Option<f64>, dc: Option<f64>, d0: f64| SweepRow {
                energy: e_ev,
                mode,
                d: d_si,
                probability: p.mean,
                stderr: p.stderr,
                seed: cfg.seed,
                growth_rate: g,
                de_collision: dc,
                de_initial: d0,
            };
            if mode.is_quantum() {
                let dt = match (mode.is_open(), cfg.dt_qmd) {
                    (false, _) => s.dt_qm,
                    (true, Some(x)) => units::fs_to_au(x),
                    (true, None) => Scenario2D::dt_qmd(d_si),
                };
                let r = s.quantum(e, d, dt, cfg.n_quantum, cfg.seed)?;
                // absorbing boundaries remove norm, so no energy moments
                rows.push(row(r.flux, None, None, r.initial.delta_e * h));
            } else {
                let r = s.classical(
                    e,
                    d,
                    s.dt_cm,
                    cfg.n_classical,
                    cfg.seed,
                    Some(t_c),
                    Some(t_c),
                )?;
                let at = r.moments.get(1);
                rows.push(row(
                    r.reaction,
                    at.and_then(|m| {
                        growth(m.time / fs, r.moments[0].mean_h.mean * h, m.mean_h.mean * h)
                    }),
                    at.map(|m| m.delta_e * h),
                    r.initial_delta_e * h,
                ));
            }
        }
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn row(mode: Mode, e: f64, d: f64, p: f64) -> SweepRow {
        SweepRow {
            energy: e,
            mode,
            d,
            probability: p,
            stderr: 0.01,
            seed: 1,
            growth_rate: None,
            de_collision: None,
            de_initial: 0.1,
        }
    }

    #[test]
    fn ordering_and_gaps() {
        let mut r = SweepResult {
            rows: vec![
                row(Mode::Cm, 2.0, 0.0, 0.5),
                row(Mode::Qm, 2.0, 0.0, 0.4),
                row(Mode::Cm, 1.0, 0.0, 0.0),
                row(Mode::Qm, 1.0, 0.0, 0.2),
            ],
            provenance: Provenance::of(&ExperimentConfig::default()),
        };
        r.sort();
        let order: Vec<_> = r.rows.iter().map(|x| (x.mode, x.energy)).collect();
        assert_eq!(
            order,
            vec![
                (Mode::Qm, 1.0),
                (Mode::Qm, 2.0),
                (Mode::Cm, 1.0),
                (Mode::Cm, 2.0)
            ]
        );
        let g = r.max_gap((Mode::Qm, 0.0), (Mode::Cm, 0.0)).unwrap();
        assert!((g.mean - 0.2).abs() < 1e-12);
        assert!((g.stderr - 0.01 * 2f64.sqrt()).abs() < 1e-12);
        assert_eq!(r.delta_e_mismatch(), Some(0.0));
    }

    #[test]
    fn hash_tracks_canonical_text() {
        let a = ExperimentConfig::default();
        let mut b = a.clone();
        b.output = Some("elsewhere.csv".into());
        assert_eq!(config_hash(&a), config_hash(&b));
        b.seed = 2;
        assert_ne!(config_hash(&a), config_hash(&b));
        assert_eq!(config_hash(&a).len(), 64);
    }

    #[test]
    fn small_sbs_sweep() {
        let mut cfg = ExperimentConfig::default();
        cfg.modes = vec![Mode::Cm, Mode::Qm];
        cfg.energies = Some("2.0".parse().unwrap());
        cfg.n_classical = 200;
        let r = run_sweep(&cfg).unwrap();
        assert_eq!(r.rows.len(), 2);
        assert_eq!(r.rows[0].mode, Mode::Qm);
        // closed dynamics: no energy growth, constant width
        let q = &r.rows[0];
        assert!(q.growth_rate.unwrap().abs() < 1e-4, "{q:?}");
        assert!((q.de_collision.unwrap() - 0.1).abs() < 2e-3);
        assert!((q.probability - 0.595).abs() < 0.01, "{}", q.probability);
        assert!(r.delta_e_mismatch().unwrap() < 0.15);
    }
}
