//! Command-line arguments.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

#[derive(Debug, Parser)]
#[command(
    name = "decoscat",
    version,
    about = "Barrier and collinear reactive scattering with decoherence"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Energy sweep over the selected modes; writes a CSV.
    Run(RunArgs),
    /// Energy and energy-width time series for one mode at one energy.
    Dispersion(DispersionArgs),
    /// Decoherence strength that washes out a resonance of width dE.
    PredictDr(PredictDrArgs),
    /// Decoherence strength 2 f m k T from a relaxation time.
    EstimateD(EstimateDArgs),
    /// Trace identities and free-particle moment laws.
    Verify(VerifyArgs),
}

/// One flag per configuration key. Flags override the config file.
#[derive(Debug, Clone, Default, Args)]
pub struct ConfigFlags {
    /// SBW, SBS, DB, model-2D or custom.
    #[arg(long)]
    pub preset: Option<String>,
    /// Comma-separated subset of QM,QMD,CM,CMD.
    #[arg(long)]
    pub modes: Option<String>,
    /// start:stop:step, or a single energy.
    #[arg(long)]
    pub energies: Option<String>,
    /// Decoherence strength(s), comma-separated.
    #[arg(long = "D", visible_alias = "d")]
    pub d: Option<String>,
    /// Realizations and trajectories per cell.
    #[arg(long)]
    pub n: Option<String>,
    #[arg(long = "n_classical", visible_alias = "n-classical")]
    pub n_classical: Option<String>,
    #[arg(long)]
    pub seed: Option<String>,
    /// Output CSV path; standard output if unset.
    #[arg(long)]
    pub out: Option<String>,
    #[arg(long)]
    pub mass: Option<String>,
    #[arg(long = "delta_e", visible_alias = "delta-e")]
    pub delta_e: Option<String>,
    #[arg(long = "dt_qm", visible_alias = "dt-qm")]
    pub dt_qm: Option<String>,
    #[arg(long = "dt_qmd", visible_alias = "dt-qmd")]
    pub dt_qmd: Option<String>,
    #[arg(long = "dt_cm", visible_alias = "dt-cm")]
    pub dt_cm: Option<String>,
    #[arg(long = "t_f", visible_alias = "t-f")]
    pub t_f: Option<String>,
    #[arg(long = "t_f_classical", visible_alias = "t-f-classical")]
    pub t_f_classical: Option<String>,
    /// Custom preset: single or double.
    #[arg(long)]
    pub barrier: Option<String>,
    #[arg(long)]
    pub v0: Option<String>,
    #[arg(long)]
    pub alpha: Option<String>,
    #[arg(long)]
    pub beta: Option<String>,
    #[arg(long)]
    pub surface: Option<String>,
    #[arg(long)]
    pub gamma: Option<String>,
    #[arg(long)]
    pub x0: Option<String>,
    #[arg(long = "y_flux", visible_alias = "y-flux")]
    pub y_flux: Option<String>,
    #[arg(long = "y_classical", visible_alias = "y-classical")]
    pub y_classical: Option<String>,
    #[arg(long)]
    pub dx: Option<String>,
    #[arg(long)]
    pub dy: Option<String>,
    #[arg(long = "x_min", visible_alias = "x-min")]
    pub x_min: Option<String>,
    #[arg(long = "y_min", visible_alias = "y-min")]
    pub y_min: Option<String>,
}

impl ConfigFlags {
    /// The flags that were given, as `(key, value)`.
    pub fn pairs(&self) -> Vec<(&'static str, &str)> {
        [
            ("preset", &self.preset),
            ("modes", &self.modes),
            ("energies", &self.energies),
            ("D", &self.d),
            ("n", &self.n),
            ("n_classical", &self.n_classical),
            ("seed", &self.seed),
            ("out", &self.out),
            ("mass", &self.mass),
            ("delta_e", &self.delta_e),
            ("dt_qm", &self.dt_qm),
            ("dt_qmd", &self.dt_qmd),
            ("dt_cm", &self.dt_cm),
            ("t_f", &self.t_f),
            ("t_f_classical", &self.t_f_classical),
            ("barrier", &self.barrier),
            ("v0", &self.v0),
            ("alpha", &self.alpha),
            ("beta", &self.beta),
            ("surface", &self.surface),
            ("gamma", &self.gamma),
            ("x0", &self.x0),
            ("y_flux", &self.y_flux),
            ("y_classical", &self.y_classical),
            ("dx", &self.dx),
            ("dy", &self.dy),
            ("x_min", &self.x_min),
            ("y_min", &self.y_min),
        ]
        .into_iter()
        .filter_map(|(k, v)| v.as_deref().map(|v| (k, v)))
        .collect()
    }
}

#[derive(Debug, Clone, Args)]
pub struct RunArgs {
    /// Flat key = value file; flags override it.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Also write a plot script for P(E) per mode.
    #[arg(long)]
    pub plot: Option<PathBuf>,
    #[command(flatten)]
    pub flags: ConfigFlags,
}

#[derive(Debug, Clone, Args)]
pub struct DispersionArgs {
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// QM, QMD, CM or CMD.
    #[arg(long)]
    pub mode: String,
    /// Mean energy of the packet.
    #[arg(long = "E")]
    pub energy: f64,
    /// Sampling interval.
    #[arg(long)]
    pub every: f64,
    /// Last sample time.
    #[arg(long)]
    pub until: f64,
    #[command(flatten)]
    pub flags: ConfigFlags,
}

#[derive(Debug, Clone, Args)]
pub struct PredictDrArgs {
    /// Resonance width.
    #[arg(long = "dE")]
    pub delta_e: f64,
    #[arg(long)]
    pub m: f64,
    #[arg(long = "E0")]
    pub e0: f64,
    /// Time at which the resonance forms.
    #[arg(long = "tR")]
    pub t_r: f64,
}

#[derive(Debug, Clone, Args)]
pub struct EstimateDArgs {
    /// Relaxation time in seconds.
    #[arg(long)]
    pub tau: f64,
    /// Particle mass in kg; hydrogen if unset.
    #[arg(long)]
    pub mass: Option<f64>,
    /// Temperature in kelvin.
    #[arg(long = "T", default_value_t = 298.0)]
    pub temperature: f64,
}

#[derive(Debug, Clone, Args)]
pub struct VerifyArgs {
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    /// Quantum realizations for the moment laws.
    #[arg(long = "n-quantum", default_value_t = 500)]
    pub n_quantum: usize,
    /// Classical trajectories for the moment laws.
    #[arg(long = "n-classical", default_value_t = 10_000)]
    pub n_classical: usize,
}
