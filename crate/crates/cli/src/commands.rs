//! Subcommand implementations. Each writes its report to `out`.

use std::fs;
use std::io::Write;
use std::path::Path;

use anyhow::{bail, Context, Result};
use decoscat_core::experiments::{
    dispersion_series, estimate_d_physical, estimate_washout_d, moment_law_suite, run_sweep,
    trace_suite, ExperimentConfig, Mode, MomentLawSettings, Provenance,
};
use decoscat_core::units;

use crate::args::{ConfigFlags, DispersionArgs, EstimateDArgs, PredictDrArgs, RunArgs, VerifyArgs};
use crate::output::{fmt_f64, plot_script, sweep_csv_bytes, write_dispersion_csv, write_file};

/// Trace identities must hold to this relative residual.
pub const TRACE_TOLERANCE: f64 = 1e-8;
/// Moment-law tolerances: classical, quantum energy, quantum width.
pub const CLASSICAL_MOMENT_TOLERANCE: f64 = 0.05;
pub const QUANTUM_ENERGY_TOLERANCE: f64 = 0.05;
pub const QUANTUM_WIDTH_TOLERANCE: f64 = 0.10;

/// Config file (if any) with the flags applied on top.
pub fn build_config(file: Option<&Path>, flags: &ConfigFlags) -> Result<ExperimentConfig> {
    let mut cfg = ExperimentConfig::default();
    if let Some(path) = file {
        let text =
            fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        cfg.apply_text(&text)
            .with_context(|| format!("in {}", path.display()))?;
    }
    for (k, v) in flags.pairs() {
        cfg.set(k, v).with_context(|| format!("--{k}"))?;
    }
    cfg.validate()?;
    Ok(cfg)
}

pub fn run(args: &RunArgs, out: &mut dyn Write) -> Result<()> {
    let cfg = build_config(args.config.as_deref(), &args.flags)?;
    let result = run_sweep(&cfg)?;
    let bytes = sweep_csv_bytes(&result)?;
    match &cfg.output {
        Some(path) => {
            write_file(Path::new(path), &bytes)?;
            writeln!(out, "wrote {} rows to {path}", result.rows.len())?;
        }
        None => out.write_all(&bytes)?,
    }
    if let Some(plot) = &args.plot {
        let data = cfg.output.as_deref().unwrap_or("-");
        write_file(plot, plot_script(&result, Path::new(data)).as_bytes())?;
    }
    Ok(())
}

pub fn dispersion(args: &DispersionArgs, out: &mut dyn Write) -> Result<()> {
    let cfg = build_config(args.config.as_deref(), &args.flags)?;
    let mode: Mode = args.mode.parse()?;
    let d = if mode.is_open() {
        match cfg.d.as_slice() {
            [d] => *d,
            _ => bail!("{mode} needs exactly one D value"),
        }
    } else {
        0.0
    };
    let series = dispersion_series(&cfg, mode, args.energy, d, args.every, args.until)?;
    let mut buf = Vec::new();
    write_dispersion_csv(&mut buf, &series, &Provenance::of(&cfg))?;
    match &cfg.output {
        Some(path) => {
            write_file(Path::new(path), &buf)?;
            writeln!(out, "wrote {} samples to {path}", series.times.len())?;
        }
        None => out.write_all(&buf)?,
    }
    Ok(())
}

pub fn predict_dr(args: &PredictDrArgs, out: &mut dyn Write) -> Result<()> {
    let inputs = [args.delta_e, args.m, args.e0, args.t_r];
    if inputs.iter().any(|x| !(*x >= 0.0)) || args.m <= 0.0 || args.e0 <= 0.0 || args.t_r <= 0.0 {
        bail!("dE must be non-negative and m, E0, tR positive");
    }
    let d = estimate_washout_d(args.delta_e, args.m, args.e0, args.t_r);
    writeln!(out, "D_R = {}", fmt_f64(d))?;
    Ok(())
}

pub fn estimate_d(args: &EstimateDArgs, out: &mut dyn Write) -> Result<()> {
    if !(args.tau > 0.0 && args.temperature >= 0.0) {
        bail!("tau must be positive and T non-negative");
    }
    let mass = args.mass.unwrap_or(units::HYDROGEN_MASS_KG);
    if !(mass > 0.0) {
        bail!("mass must be positive");
    }
    let d = estimate_d_physical(1.0 / args.tau, mass, args.temperature);
    writeln!(out, "D = {} kg J/s", fmt_f64(d.si))?;
    writeln!(out, "D = {} atomic units", fmt_f64(d.atomic))?;
    Ok(())
}

fn verdict(ok: bool) -> &'static str {
    if ok {
        "PASS"
    } else {
        "FAIL"
    }
}

/// Returns whether every check passed.
pub fn verify(args: &VerifyArgs, out: &mut dyn Write) -> Result<bool> {
    let trace = trace_suite(64, 20, args.seed)?;
    let t_ok = trace.max_residual() < TRACE_TOLERANCE;
    writeln!(
        out,
        "{} trace identities: max relative residual {:.3e} over {} densities on {} points (< {:e})",
        verdict(t_ok),
        trace.max_residual(),
        trace.residuals.len(),
        trace.points,
        TRACE_TOLERANCE
    )?;
    let s = MomentLawSettings {
        n_quantum: args.n_quantum,
        n_classical: args.n_classical,
        seed: args.seed,
        ..Default::default()
    };
    let r = moment_law_suite(&s)?;
    let mut all = t_ok;
    for (label, c, tol) in [
        ("classical", &r.classical_energy, CLASSICAL_MOMENT_TOLERANCE),
        ("classical", &r.classical_width, CLASSICAL_MOMENT_TOLERANCE),
        ("quantum", &r.quantum_energy, QUANTUM_ENERGY_TOLERANCE),
        ("quantum", &r.quantum_width, QUANTUM_WIDTH_TOLERANCE),
    ] {
        let ok = c.relative_error() < tol;
        all &= ok;
        writeln!(
            out,
            "{} {label} {}: measured {:.5e}, expected {:.5e}, relative error {:.3} (< {tol})",
            verdict(ok),
            c.name,
            c.measured,
            c.expected,
            c.relative_error()
        )?;
    }
    Ok(all)
}
