//! Experiment configuration and its flat `key = value` text form.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::models::barrier::{Barrier1D, BarrierKind};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Preset {
    Sbw,
    Sbs,
    Db,
    Model2d,
    Custom,
}

impl Preset {
    pub fn name(self) -> &'static str {
        match self {
            Preset::Sbw => "SBW",
            Preset::Sbs => "SBS",
            Preset::Db => "DB",
            Preset::Model2d => "model-2D",
            Preset::Custom => "custom",
        }
    }

    pub fn is_two_d(self) -> bool {
        self == Preset::Model2d
    }
}

impl FromStr for Preset {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "sbw" => Ok(Preset::Sbw),
            "sbs" => Ok(Preset::Sbs),
            "db" => Ok(Preset::Db),
            "model-2d" | "model2d" => Ok(Preset::Model2d),
            "custom" => Ok(Preset::Custom),
            other => Err(Error::InvalidParameter(format!("unknown preset '{other}'"))),
        }
    }
}

impl fmt::Display for Preset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Dynamics mode. The derived order (QM, QMD, CM, CMD) is the row order of
/// sweep output.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Mode {
    Qm,
    Qmd,
    Cm,
    Cmd,
}

impl Mode {
    pub const ALL: [Mode; 4] = [Mode::Qm, Mode::Qmd, Mode::Cm, Mode::Cmd];

    pub fn label(self) -> &'static str {
        match self {
            Mode::Qm => "QM",
            Mode::Qmd => "QMD",
            Mode::Cm => "CM",
            Mode::Cmd => "CMD",
        }
    }

    pub fn is_quantum(self) -> bool {
        matches!(self, Mode::Qm | Mode::Qmd)
    }

    pub fn is_open(self) -> bool {
        matches!(self, Mode::Qmd | Mode::Cmd)
    }
}

impl FromStr for Mode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_uppercase().as_str() {
            "QM" => Ok(Mode::Qm),
            "QMD" => Ok(Mode::Qmd),
            "CM" => Ok(Mode::Cm),
            "CMD" => Ok(Mode::Cmd),
            other => Err(Error::InvalidParameter(format!("unknown mode '{other}'"))),
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// Inclusive arithmetic energy grid `start, start + step, ..., stop`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnergySweep {
    pub start: f64,
    pub stop: f64,
    pub step: f64,
}

impl EnergySweep {
    pub fn new(start: f64, stop: f64, step: f64) -> Result<Self> {
        let ok = start.is_finite() && stop.is_finite() && step.is_finite();
        if !ok || stop < start || (stop > start && !(step > 0.0)) {
            return Err(Error::InvalidParameter(format!(
                "bad energy sweep {start}:{stop}:{step}"
            )));
        }
        Ok(Self { start, stop, step })
    }

    /// Energies rounded to 12 significant digits so that `0.1` steps land
    /// on their decimal values.
    pub fn energies(&self) -> Vec<f64> {
        if self.stop == self.start {
            return vec![self.start];
        }
        let n = ((self.stop - self.start) / self.step + 1e-9).floor() as usize;
        (0..=n)
            .map(|i| {
                let e = self.start + i as f64 * self.step;
                format!("{e:.12e}").parse().unwrap_or(e)
            })
            .collect()
    }
}

impl FromStr for EnergySweep {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(':').map(str::trim).collect();
        let num = |t: &str| -> Result<f64> {
            t.parse()
                .map_err(|_| Error::InvalidParameter(format!("bad number '{t}' in energy sweep")))
        };
        match parts.as_slice() {
            [e] => {
                let e = num(e)?;
                EnergySweep::new(e, e, 0.0)
            }
            [a, b, c] => EnergySweep::new(num(a)?, num(b)?, num(c)?),
            _ => Err(Error::InvalidParameter(format!(
                "energy sweep must be start:stop:step, got '{s}'"
            ))),
        }
    }
}

impl fmt::Display for EnergySweep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}:{}", self.start, self.stop, self.step)
    }
}

/// Full description of a sweep. Unset optional values take preset
/// defaults. For `model-2D`, energies are total energies in eV, `D` is in
/// kg J/s, time steps and `t_f` are in fs and lengths in bohr; the 1D
/// presets use the dimensionless units with `m = 1`, `hbar = 0.1`.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub preset: Preset,
    pub modes: Vec<Mode>,
    pub energies: Option<EnergySweep>,
    /// Decoherence strengths for the open modes.
    pub d: Vec<f64>,
    pub n_quantum: usize,
    pub n_classical: usize,
    pub seed: u64,
    pub output: Option<String>,
    pub mass: Option<f64>,
    pub delta_e: Option<f64>,
    pub dt_qm: Option<f64>,
    pub dt_qmd: Option<f64>,
    pub dt_cm: Option<f64>,
    pub t_f: Option<f64>,
    pub t_f_classical: Option<f64>,
    /// Custom barrier: `single` or `double`.
    pub barrier: BarrierKind,
    pub v0: Option<f64>,
    pub alpha: Option<f64>,
    pub beta: Option<f64>,
    /// 2D: registered surface name.
    pub surface: String,
    pub gamma: Option<f64>,
    pub x0: Option<f64>,
    pub y_flux: Option<f64>,
    pub y_classical: Option<f64>,
    /// Grid spacing along `x` (1D and 2D).
    pub dx: Option<f64>,
    /// 2D: grid spacing along `y`.
    pub dy: Option<f64>,
    /// 2D: grid origin.
    pub x_min: Option<f64>,
    pub y_min: Option<f64>,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            preset: Preset::Sbs,
            modes: vec![Mode::Qm],
            energies: None,
            d: Vec::new(),
            n_quantum: 100,
            n_classical: 10_000,
            seed: 1,
            output: None,
            mass: None,
            delta_e: None,
            dt_qm: None,
            dt_qmd: None,
            dt_cm: None,
            t_f: None,
            t_f_classical: None,
            barrier: BarrierKind::Single,
            v0: None,
            alpha: None,
            beta: None,
            surface: "model-2d".into(),
            gamma: None,
            x0: None,
            y_flux: None,
            y_classical: None,
            dx: None,
            dy: None,
            x_min: None,
            y_min: None,
        }
    }
}

fn parse_f64(key: &str, v: &str) -> Result<f64> {
    v.trim()
        .parse()
        .map_err(|_| Error::InvalidParameter(format!("{key}: '{v}' is not a number")))
}

fn fmt_opt(v: Option<f64>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

impl ExperimentConfig {
    /// Every recognised key, in canonical order.
    pub const KEYS: [&'static str; 28] = [
        "preset",
        "modes",
        "energies",
        "D",
        "n",
        "n_classical",
        "seed",
        "out",
        "mass",
        "delta_e",
        "dt_qm",
        "dt_qmd",
        "dt_cm",
        "t_f",
        "t_f_classical",
        "barrier",
        "v0",
        "alpha",
        "beta",
        "surface",
        "gamma",
        "x0",
        "y_flux",
        "y_classical",
        "dx",
        "dy",
        "x_min",
        "y_min",
    ];

    /// Sets one key. `n` sets both ensemble sizes; `n_quantum` sets only the
    /// quantum one. An empty value resets an optional key.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        let v = value.trim();
        let opt = |k: &str| -> Result<Option<f64>> {
            if v.is_empty() {
                Ok(None)
            } else {
                parse_f64(k, v).map(Some)
            }
        };
        let count = |k: &str| -> Result<usize> {
            v.parse()
                .map_err(|_| Error::InvalidParameter(format!("{k}: '{v}' is not a count")))
        };
        match key {
            "preset" => self.preset = v.parse()?,
            "modes" => {
                self.modes = v
                    .split(',')
                    .filter(|s| !s.trim().is_empty())
                    .map(str::parse)
                    .collect::<Result<_>>()?;
                self.modes.sort();
                self.modes.dedup();
            }
            "energies" => self.energies = if v.is_empty() { None } else { Some(v.parse()?) },
            "D" | "d" => {
                self.d = v
                    .split(',')
                    .filter(|s| !s.trim().is_empty())
                    .map(|s| parse_f64(key, s))
                    .collect::<Result<_>>()?;
            }
            "n" => {
                self.n_quantum = count(key)?;
                self.n_classical = self.n_quantum;
            }
            "n_quantum" => self.n_quantum = count(key)?,
            "n_classical" => self.n_classical = count(key)?,
            "seed" => {
                self.seed = v
                    .parse()
                    .map_err(|_| Error::InvalidParameter(format!("seed: '{v}'")))?
            }
            "out" => self.output = (!v.is_empty()).then(|| v.to_string()),
            "mass" => self.mass = opt(key)?,
            "delta_e" => self.delta_e = opt(key)?,
            "dt_qm" => self.dt_qm = opt(key)?,
            "dt_qmd" => self.dt_qmd = opt(key)?,
            "dt_cm" => self.dt_cm = opt(key)?,
            "t_f" => self.t_f = opt(key)?,
            "t_f_classical" => self.t_f_classical = opt(key)?,
            "barrier" => {
                self.barrier = match v.to_ascii_lowercase().as_str() {
                    "single" => BarrierKind::Single,
                    "double" => BarrierKind::Double,
                    other => return Err(Error::InvalidParameter(format!("barrier: '{other}'"))),
                }
            }
            "v0" => self.v0 = opt(key)?,
            "alpha" => self.alpha = opt(key)?,
            "beta" => self.beta = opt(key)?,
            "surface" => self.surface = v.to_string(),
            "gamma" => self.gamma = opt(key)?,
            "x0" => self.x0 = opt(key)?,
            "y_flux" => self.y_flux = opt(key)?,
            "y_classical" => self.y_classical = opt(key)?,
            "dx" => self.dx = opt(key)?,
            "dy" => self.dy = opt(key)?,
            "x_min" => self.x_min = opt(key)?,
            "y_min" => self.y_min = opt(key)?,
            other => {
                return Err(Error::InvalidParameter(format!(
                    "unknown config key '{other}'"
                )))
            }
        }
        Ok(())
    }

    /// Parses `key = value` lines; `#` starts a comment.
    pub fn apply_text(&mut self, text: &str) -> Result<()> {
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line.split_once('=').ok_or_else(|| {
                Error::InvalidParameter(format!("line {}: expected key = value", i + 1))
            })?;
            self.set(k.trim(), v)?;
        }
        Ok(())
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut c = Self::default();
        c.apply_text(text)?;
        Ok(c)
    }

    /// Value of `key` in the form accepted by [`set`](Self::set).
    pub fn get(&self, key: &str) -> Option<String> {
        Some(match key {
            "preset" => self.preset.name().to_ascii_lowercase(),
            "modes" => self
                .modes
                .iter()
                .map(|m| m.label())
                .collect::<Vec<_>>()
                .join(","),
            "energies" => self.energies.map(|e| e.to_string()).unwrap_or_default(),
            "D" => self
                .d
                .iter()
                .map(|d| d.to_string())
                .collect::<Vec<_>>()
                .join(","),
            "n" | "n_quantum" => self.n_quantum.to_string(),
            "n_classical" => self.n_classical.to_string(),
            "seed" => self.seed.to_string(),
            "out" => self.output.clone().unwrap_or_default(),
            "mass" => fmt_opt(self.mass),
            "delta_e" => fmt_opt(self.delta_e),
            "dt_qm" => fmt_opt(self.dt_qm),
            "dt_qmd" => fmt_opt(self.dt_qmd),
            "dt_cm" => fmt_opt(self.dt_cm),
            "t_f" => fmt_opt(self.t_f),
            "t_f_classical" => fmt_opt(self.t_f_classical),
            "barrier" => match self.barrier {
                BarrierKind::Single => "single".into(),
                BarrierKind::Double => "double".into(),
            },
            "v0" => fmt_opt(self.v0),
            "alpha" => fmt_opt(self.alpha),
            "beta" => fmt_opt(self.beta),
            "surface" => self.surface.clone(),
            "gamma" => fmt_opt(self.gamma),
            "x0" => fmt_opt(self.x0),
            "y_flux" => fmt_opt(self.y_flux),
            "y_classical" => fmt_opt(self.y_classical),
            "dx" => fmt_opt(self.dx),
            "dy" => fmt_opt(self.dy),
            "x_min" => fmt_opt(self.x_min),
            "y_min" => fmt_opt(self.y_min),
            _ => return None,
        })
    }

    /// Canonical `key = value` text. Two configs describe the same
    /// computation exactly when their canonical texts are equal, apart from
    /// the output path, which is left out.
    pub fn canonical(&self) -> String {
        let mut s = String::new();
        for k in Self::KEYS.iter().filter(|k| **k != "out") {
            s.push_str(k);
            s.push_str(" = ");
            s.push_str(&self.get(k).unwrap_or_default());
            s.push('\n');
        }
        s
    }

    pub fn energies_or_default(&self) -> EnergySweep {
        self.energies.unwrap_or(match self.preset {
            Preset::Sbw => EnergySweep {
                start: 0.5,
                stop: 3.5,
                step: 0.25,
            },
            Preset::Sbs | Preset::Custom => EnergySweep {
                start: 1.0,
                stop: 3.0,
                step: 0.2,
            },
            Preset::Db => EnergySweep {
                start: 1.6,
                stop: 3.4,
                step: 0.1,
            },
            Preset::Model2d => EnergySweep {
                start: 0.5,
                stop: 0.8,
                step: 0.025,
            },
        })
    }

    /// Barrier for the 1D presets and for `custom`.
    pub fn barrier_1d(&self) -> Result<Barrier1D> {
        let b = match self.preset {
            Preset::Sbw => Barrier1D::sbw(),
            Preset::Sbs => Barrier1D::sbs(),
            Preset::Db => Barrier1D::db(),
            Preset::Custom => {
                let need = |v: Option<f64>, k: &str| {
                    v.ok_or_else(|| Error::InvalidParameter(format!("custom preset needs '{k}'")))
                };
                match self.barrier {
                    BarrierKind::Single => {
                        Barrier1D::single(need(self.v0, "v0")?, need(self.alpha, "alpha")?)
                    }
                    BarrierKind::Double => Barrier1D::double(
                        need(self.v0, "v0")?,
                        need(self.alpha, "alpha")?,
                        need(self.beta, "beta")?,
                    ),
                }
            }
            Preset::Model2d => return Err(Error::Unsupported("model-2D has no 1D barrier".into())),
        };
        Ok(b)
    }

    /// Structural checks that do not need the preset resources.
    pub fn validate(&self) -> Result<()> {
        if self.modes.is_empty() {
            return Err(Error::InvalidParameter("no modes selected".into()));
        }
        let open = self.modes.iter().any(|m| m.is_open());
        if open && self.d.is_empty() {
            return Err(Error::InvalidParameter(
                "QMD/CMD need at least one D value".into(),
            ));
        }
        if let Some(d) = self.d.iter().find(|d| !(**d > 0.0) || !d.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "D must be positive, got {d}"
            )));
        }
        if self.modes.iter().any(|m| m.is_quantum() && m.is_open()) && self.n_quantum == 0 {
            return Err(Error::InvalidParameter("n must be at least 1".into()));
        }
        if self.modes.iter().any(|m| !m.is_quantum()) && self.n_classical == 0 {
            return Err(Error::InvalidParameter(
                "n_classical must be at least 1".into(),
            ));
        }
        for (k, v) in [
            ("mass", self.mass),
            ("delta_e", self.delta_e),
            ("dt_qm", self.dt_qm),
            ("dt_qmd", self.dt_qmd),
            ("dt_cm", self.dt_cm),
            ("t_f", self.t_f),
            ("t_f_classical", self.t_f_classical),
            ("gamma", self.gamma),
            ("dx", self.dx),
            ("dy", self.dy),
        ] {
            if let Some(x) = v {
                if !(x > 0.0) || !x.is_finite() {
                    return Err(Error::InvalidParameter(format!(
                        "{k} must be positive, got {x}"
                    )));
                }
            }
        }
        self.barrier_1d().map(|_| ()).or_else(|e| {
            if self.preset.is_two_d() {
                Ok(())
            } else {
                Err(e)
            }
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sweep_grid() {
        let s: EnergySweep = "0.5:3.5:0.1".parse().unwrap();
        let e = s.energies();
        assert_eq!(e.len(), 31);
        assert_eq!(e[3], 0.8);
        assert_eq!(*e.last().unwrap(), 3.5);
        assert_eq!("2.0".parse::<EnergySweep>().unwrap().energies(), vec![2.0]);
        assert!("3:1:0.1".parse::<EnergySweep>().is_err());
        assert!("1:2".parse::<EnergySweep>().is_err());
    }

    #[test]
    fn text_round_trip() {
        let mut c = ExperimentConfig::default();
        c.apply_text("preset = db # double\nmodes = CMD,QM\nD = 0.003, 0.006\nmass = 3\n\nenergies=1.9:2.7:0.1\n")
            .unwrap();
        assert_eq!(c.preset, Preset::Db);
        assert_eq!(c.modes, vec![Mode::Qm, Mode::Cmd]);
        assert_eq!(c.d, vec![0.003, 0.006]);
        let back = ExperimentConfig::from_text(&c.canonical()).unwrap();
        assert_eq!(back, c);
        assert!(c.clone().set("nope", "1").is_err());
        assert!(c.clone().apply_text("preset").is_err());
    }

    #[test]
    fn output_path_not_in_canonical_form() {
        let mut a = ExperimentConfig::default();
        let b = a.clone();
        a.set("out", "x.csv").unwrap();
        assert_eq!(a.canonical(), b.canonical());
    }

    #[test]
    fn validation() {
        let mut c = ExperimentConfig::default();
        assert!(c.validate().is_ok());
        c.set("modes", "QM,QMD").unwrap();
        assert!(c.validate().is_err());
        c.set("D", "0.03").unwrap();
        assert!(c.validate().is_ok());
        c.set("preset", "custom").unwrap();
        assert!(c.validate().is_err());
        c.apply_text("v0 = 2\nalpha = 1").unwrap();
        assert!(c.validate().is_ok());
    }
}
