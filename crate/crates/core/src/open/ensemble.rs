//! Ensembles of QSD realizations and their aggregate observables.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::qdyn::flux::{Derivative, FluxAccumulator, FluxLine};
use crate::qdyn::mask::{AbsorbingMask, MaskSpec};
use crate::qdyn::observables::{MomentEvaluator, Moments};
use crate::qdyn::propagator::Hamiltonian;
use crate::qdyn::state::WavefunctionState;

use super::qsd::{DecoherenceSpec, QsdStepper};
use super::wiener::{draw_wiener, realization_rng};

/// Mean with its Monte Carlo standard error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub mean: f64,
    pub stderr: f64,
}

impl Estimate {
    /// Sample mean and `s / sqrt(n)`; the error is zero for a single sample.
    pub fn from_samples(xs: &[f64]) -> Self {
        let n = xs.len() as f64;
        if xs.is_empty() {
            return Self {
                mean: f64::NAN,
                stderr: f64::NAN,
            };
        }
        let mean = xs.iter().sum::<f64>() / n;
        if xs.len() < 2 {
            return Self { mean, stderr: 0.0 };
        }
        let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
        Self {
            mean,
            stderr: (var / n).sqrt(),
        }
    }
}

/// Probability beyond `threshold` along `axis` counts as transmitted.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Divider {
    pub axis: usize,
    pub threshold: f64,
}

/// Stop once `t >= min_time` and the probability inside `[lo, hi]` along
/// `axis` has dropped below `threshold`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StopRule {
    pub axis: usize,
    pub lo: f64,
    pub hi: f64,
    pub threshold: f64,
    pub min_time: f64,
    pub check_every: usize,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FluxProbe {
    pub y: f64,
    pub method: Derivative,
}

/// What to measure along each realization.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Probes {
    pub mask: Option<MaskSpec>,
    pub divider: Option<Divider>,
    pub flux: Option<FluxProbe>,
    /// Record moments every this many steps, starting at step 0.
    pub moment_every: Option<usize>,
    pub stop: Option<StopRule>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MomentSample {
    pub time: f64,
    pub norm: f64,
    pub mean_h: f64,
    pub mean_h2: f64,
    pub mean_v: f64,
    pub mean_p2: Vec<f64>,
}

impl From<(&Moments, f64)> for MomentSample {
    fn from((m, time): (&Moments, f64)) -> Self {
        Self {
            time,
            norm: m.norm,
            mean_h: m.mean_h,
            mean_h2: m.mean_h2,
            mean_v: m.mean_v,
            mean_p2: m.mean_p2.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RealizationRecord {
    pub index: usize,
    pub steps: usize,
    pub final_time: f64,
    pub final_norm: f64,
    pub absorbed_reactant: f64,
    pub absorbed_product: f64,
    /// Probability beyond the divider plus absorbed product.
    pub transmission: Option<f64>,
    pub flux_integral: Option<f64>,
    pub moments: Vec<MomentSample>,
}

/// Ensemble-averaged moments at one time. `delta_e` is built from the averaged
/// `<H>` and `<H^2>`, i.e. from the density matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct EnsembleMoments {
    pub time: f64,
    pub mean_h: Estimate,
    pub mean_h2: f64,
    pub delta_e: f64,
    pub mean_p2: Vec<f64>,
}

/// Per-realization records in realization order.
#[derive(Debug, Clone, PartialEq)]
pub struct EnsembleAccumulator {
    pub master_seed: u64,
    pub records: Vec<RealizationRecord>,
}

impl EnsembleAccumulator {
    pub fn new(master_seed: u64) -> Self {
        Self {
            master_seed,
            records: Vec::new(),
        }
    }

    pub fn count(&self) -> usize {
        self.records.len()
    }

    pub fn push(&mut self, r: RealizationRecord) {
        self.records.push(r);
    }

    pub fn extend(&mut self, other: EnsembleAccumulator) {
        self.records.extend(other.records);
    }

    pub fn transmission(&self) -> Option<Estimate> {
        let xs: Option<Vec<f64>> = self.records.iter().map(|r| r.transmission).collect();
        xs.filter(|v| !v.is_empty())
            .map(|v| Estimate::from_samples(&v))
    }

    pub fn flux_probability(&self) -> Option<Estimate> {
        let xs: Option<Vec<f64>> = self.records.iter().map(|r| r.flux_integral).collect();
        xs.filter(|v| !v.is_empty())
            .map(|v| Estimate::from_samples(&v))
    }

    /// Norm-weighted averages over realizations, at the sample times all
    /// realizations share.
    pub fn moment_series(&self) -> Vec<EnsembleMoments> {
        let len = self
            .records
            .iter()
            .map(|r| r.moments.len())
            .min()
            .unwrap_or(0);
        (0..len)
            .map(|i| {
                let samples: Vec<&MomentSample> =
                    self.records.iter().map(|r| &r.moments[i]).collect();
                let w: f64 = samples.iter().map(|s| s.norm).sum();
                let h: Vec<f64> = samples.iter().map(|s| s.mean_h).collect();
                let mean_h: f64 = samples.iter().map(|s| s.norm * s.mean_h).sum::<f64>() / w;
                let mean_h2: f64 = samples.iter().map(|s| s.norm * s.mean_h2).sum::<f64>() / w;
                let dims = samples[0].mean_p2.len();
                let mean_p2 = (0..dims)
                    .map(|d| samples.iter().map(|s| s.norm * s.mean_p2[d]).sum::<f64>() / w)
                    .collect();
                EnsembleMoments {
                    time: samples[0].time,
                    mean_h: Estimate {
                        mean: mean_h,
                        stderr: Estimate::from_samples(&h).stderr,
                    },
                    mean_h2,
                    delta_e: (mean_h2 - mean_h * mean_h).max(0.0).sqrt(),
                    mean_p2,
                }
            })
            .collect()
    }
}

/// Everything shared by the realizations of one ensemble.
#[derive(Debug, Clone)]
pub struct RealizationTemplate {
    pub stepper: QsdStepper,
    pub mask: Option<AbsorbingMask>,
    pub evaluator: Option<MomentEvaluator>,
    pub flux: Option<FluxLine>,
    pub probes: Probes,
    pub n_steps: usize,
}

impl RealizationTemplate {
    pub fn new(
        initial: &WavefunctionState,
        ham: &Hamiltonian,
        dec: &DecoherenceSpec,
        dt: f64,
        n_steps: usize,
        probes: &Probes,
    ) -> Result<Self> {
        let grid = &initial.grid;
        let mask = match &probes.mask {
            Some(spec) => {
                let m = AbsorbingMask::new(grid, spec)?;
                m.check_clear_of(initial, 1e-6)?;
                Some(m)
            }
            None => None,
        };
        let evaluator = match probes.moment_every {
            Some(0) => {
                return Err(Error::InvalidParameter(
                    "moment_every must be positive".into(),
                ))
            }
            Some(_) => Some(MomentEvaluator::new(grid, ham)?),
            None => None,
        };
        let flux = probes
            .flux
            .map(|f| FluxLine::new(grid, f.y, ham.mass, ham.hbar, f.method))
            .transpose()?;
        if let Some(d) = probes.divider {
            if d.axis >= grid.dims() {
                return Err(Error::InvalidParameter(format!("divider axis {}", d.axis)));
            }
        }
        Ok(Self {
            stepper: QsdStepper::new(grid, ham, dec, dt)?,
            mask,
            evaluator,
            flux,
            probes: probes.clone(),
            n_steps,
        })
    }

    /// Runs realization `k` with noise from `realization_rng(master_seed, k)`.
    pub fn run(
        &self,
        initial: &WavefunctionState,
        master_seed: u64,
        k: usize,
    ) -> Result<RealizationRecord> {
        let mut stepper = self.stepper.clone();
        let mut evaluator = self.evaluator.clone();
        let mut rng = realization_rng(master_seed, k as u64);
        let couplings = stepper.decoherence().couplings();
        let dt = stepper.dt();
        let closed = stepper.decoherence().is_closed();
        let mut state = initial.clone();
        let mut flux_acc = FluxAccumulator::default();
        let mut moments = Vec::new();
        let every = self.probes.moment_every.unwrap_or(usize::MAX);

        let mut record = |state: &WavefunctionState,
                          step: usize,
                          moments: &mut Vec<MomentSample>,
                          flux_acc: &mut FluxAccumulator| {
            if let Some(f) = &self.flux {
                flux_acc.record(state.time, f.flux(state));
            }
            if step.is_multiple_of(every) {
                if let Some(ev) = evaluator.as_mut() {
                    moments.push(MomentSample::from((&ev.evaluate(state), state.time)));
                }
            }
        };
        record(&state, 0, &mut moments, &mut flux_acc);
        let mut steps = 0;
        let mut noise = super::wiener::WienerIncrement::zero(dt, couplings);
        while steps < self.n_steps {
            if !closed {
                noise = draw_wiener(&mut rng, dt, couplings);
            }
            stepper
                .step(&mut state, &noise)
                .map_err(|e| e.in_realization(k))?;
            if let Some(m) = &self.mask {
                m.apply(&mut state);
            }
            steps += 1;
            record(&state, steps, &mut moments, &mut flux_acc);
            if let Some(s) = self.probes.stop {
                if steps % s.check_every.max(1) == 0
                    && state.time >= s.min_time
                    && state.probability_where(|q| q[s.axis] >= s.lo && q[s.axis] <= s.hi)
                        < s.threshold
                {
                    break;
                }
            }
        }
        let transmission = self
            .probes
            .divider
            .map(|d| state.probability_where(|q| q[d.axis] > d.threshold) + state.absorbed_product);
        Ok(RealizationRecord {
            index: k,
            steps,
            final_time: state.time,
            final_norm: state.norm_sq(),
            absorbed_reactant: state.absorbed_reactant,
            absorbed_product: state.absorbed_product,
            transmission,
            flux_integral: self.flux.as_ref().map(|_| flux_acc.integral),
            moments,
        })
    }
}

/// Runs realizations `0..n_realizations` in parallel and collects them in
/// index order; the result does not depend on scheduling.
#[allow(clippy::too_many_arguments)]
pub fn run_qsd_ensemble(
    initial: &WavefunctionState,
    ham: &Hamiltonian,
    dec: &DecoherenceSpec,
    dt: f64,
    n_steps: usize,
    n_realizations: usize,
    master_seed: u64,
    probes: &Probes,
) -> Result<EnsembleAccumulator> {
    let template = RealizationTemplate::new(initial, ham, dec, dt, n_steps, probes)?;
    let results: Vec<Result<RealizationRecord>> = (0..n_realizations)
        .into_par_iter()
        .map(|k| template.run(initial, master_seed, k))
        .collect();
    let mut acc = EnsembleAccumulator::new(master_seed);
    for r in results {
        acc.push(r?);
    }
    Ok(acc)
}
