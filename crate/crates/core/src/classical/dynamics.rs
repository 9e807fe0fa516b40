//! RK4 Hamiltonian flow, Langevin momentum diffusion, and ensemble runs with
//! reactive counting.

use rand::Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;

use super::phase::{ForceField, PhasePoint, PhaseSpaceEnsemble};
use crate::open::ensemble::Estimate;
use crate::open::wiener::realization_rng;
use crate::qdyn::mask::Side;

/// Classical fourth-order Runge-Kutta step of Hamilton's equations.
pub fn rk4_step<const N: usize, F: ForceField<N> + ?Sized>(
    pt: &PhasePoint<N>,
    field: &F,
    mass: f64,
    dt: f64,
) -> PhasePoint<N> {
    let deriv = |q: &[f64; N], p: &[f64; N]| {
        let g = field.gradient(q);
        let mut dq = [0.0; N];
        let mut dp = [0.0; N];
        for i in 0..N {
            dq[i] = p[i] / mass;
            dp[i] = -g[i];
        }
        (dq, dp)
    };
    let shift = |a: &[f64; N], d: &[f64; N], h: f64| {
        let mut o = *a;
        for i in 0..N {
            o[i] += h * d[i];
        }
        o
    };
    let (q, p) = (&pt.q, &pt.p);
    let (k1q, k1p) = deriv(q, p);
    let (k2q, k2p) = deriv(&shift(q, &k1q, 0.5 * dt), &shift(p, &k1p, 0.5 * dt));
    let (k3q, k3p) = deriv(&shift(q, &k2q, 0.5 * dt), &shift(p, &k2p, 0.5 * dt));
    let (k4q, k4p) = deriv(&shift(q, &k3q, dt), &shift(p, &k3p, dt));
    let mut out = *pt;
    for i in 0..N {
        out.q[i] += dt / 6.0 * (k1q[i] + 2.0 * k2q[i] + 2.0 * k3q[i] + k4q[i]);
        out.p[i] += dt / 6.0 * (k1p[i] + 2.0 * k2p[i] + 2.0 * k3p[i] + k4p[i]);
    }
    out
}

/// RK4 step followed by momentum kicks `sqrt(2 D dt) xi`. With `D = 0` no
/// random numbers are drawn and the result is the RK4 step.
pub fn langevin_step<const N: usize, F: ForceField<N> + ?Sized, R: Rng + ?Sized>(
    pt: &PhasePoint<N>,
    field: &F,
    mass: f64,
    dt: f64,
    d: f64,
    rng: &mut R,
) -> PhasePoint<N> {
    let mut out = rk4_step(pt, field, mass, dt);
    if d > 0.0 {
        let s = (2.0 * d * dt).sqrt();
        for p in &mut out.p {
            let xi: f64 = rng.sample(StandardNormal);
            *p += s * xi;
        }
    }
    out
}

/// Coordinate threshold: `axis` above `threshold` counts as crossed.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Threshold {
    pub axis: usize,
    pub threshold: f64,
}

/// Leaving the grid region on `side` of `bound` along `axis` ends a
/// trajectory as non-reactive.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Exit {
    pub axis: usize,
    pub bound: f64,
    pub side: Side,
}

impl Exit {
    fn reached(&self, q: f64) -> bool {
        match self.side {
            Side::Low => q < self.bound,
            Side::High => q > self.bound,
        }
    }
}

/// Settings for a trajectory ensemble run.
#[derive(Debug, Clone, PartialEq)]
pub struct TrajectoryRun {
    pub mass: f64,
    pub dt: f64,
    pub n_steps: usize,
    pub d: f64,
    pub master_seed: u64,
    /// Reaching beyond this counts as reactive (once crossed, always counted).
    pub divider: Option<Threshold>,
    pub reactant_exit: Option<Exit>,
    /// Record ensemble energy moments every this many steps.
    pub moment_every: Option<usize>,
    /// Last step at which moments are recorded; defaults to `n_steps`.
    pub moment_until: Option<usize>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ClassicalMoments {
    pub time: f64,
    pub mean_h: Estimate,
    pub mean_h2: f64,
    pub delta_e: f64,
    pub mean_p2: Vec<f64>,
    pub var_p: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrajectoryOutcome<const N: usize> {
    pub final_points: Vec<PhasePoint<N>>,
    pub reactive: Vec<bool>,
    pub moments: Vec<ClassicalMoments>,
}

impl<const N: usize> TrajectoryOutcome<N> {
    /// Weighted reactive fraction with binomial standard error.
    pub fn reaction_probability(&self) -> Estimate {
        count_reactive(&self.final_points, &self.reactive)
    }
}

/// Weighted fraction of reactive points with error `sqrt(P (1 - P) / N)`.
pub fn count_reactive<const N: usize>(points: &[PhasePoint<N>], reactive: &[bool]) -> Estimate {
    let w: f64 = points.iter().map(|p| p.weight).sum();
    // fold from +0.0: an empty f64 sum is -0.0
    let r = points
        .iter()
        .zip(reactive)
        .filter(|(_, &r)| r)
        .fold(0.0, |acc, (p, _)| acc + p.weight);
    let p = if w > 0.0 { r / w } else { f64::NAN };
    let n = points.len() as f64;
    Estimate {
        mean: p,
        stderr: (p * (1.0 - p) / n).max(0.0).sqrt(),
    }
}

/// Propagates every point with its own stream `realization_rng(seed, k)`.
///
/// A trajectory that crosses the divider is marked reactive. Once past the
/// last moment record it stops there, or on reaching the reactant exit.
pub fn run_trajectories<const N: usize, F: ForceField<N> + ?Sized>(
    ensemble: &PhaseSpaceEnsemble<N>,
    field: &F,
    run: &TrajectoryRun,
) -> TrajectoryOutcome<N> {
    let record_every = run.moment_every.unwrap_or(0);
    let horizon = if record_every > 0 {
        run.moment_until.unwrap_or(run.n_steps).min(run.n_steps)
    } else {
        0
    };
    let n_rec = horizon.checked_div(record_every).map_or(0, |k| k + 1);
    let per: Vec<(PhasePoint<N>, bool, Vec<(f64, [f64; N])>)> = ensemble
        .points
        .par_iter()
        .enumerate()
        .map(|(k, start)| {
            let mut rng = realization_rng(run.master_seed, k as u64);
            let mut pt = *start;
            let crossed =
                |pt: &PhasePoint<N>| run.divider.is_some_and(|d| pt.q[d.axis] > d.threshold);
            let mut reactive = crossed(&pt);
            let mut samples = Vec::with_capacity(n_rec);
            if record_every > 0 {
                samples.push((pt.energy(field, run.mass), pt.p));
            }
            for step in 1..=run.n_steps {
                if step > horizon {
                    if reactive {
                        break;
                    }
                    if run.reactant_exit.is_some_and(|e| e.reached(pt.q[e.axis])) {
                        break;
                    }
                }
                pt = langevin_step(&pt, field, run.mass, run.dt, run.d, &mut rng);
                reactive |= crossed(&pt);
                if record_every > 0 && step <= horizon && step % record_every == 0 {
                    samples.push((pt.energy(field, run.mass), pt.p));
                }
            }
            (pt, reactive, samples)
        })
        .collect();

    let mut moments = Vec::with_capacity(n_rec);
    let w: f64 = ensemble.points.iter().map(|p| p.weight).sum();
    for i in 0..n_rec {
        let mut h = Vec::with_capacity(per.len());
        let (mut s1, mut s2) = (0.0, 0.0);
        let mut p1 = vec![0.0; N];
        let mut p2 = vec![0.0; N];
        for ((_, _, s), pt) in per.iter().zip(&ensemble.points) {
            let (e, p) = s[i];
            h.push(e);
            s1 += pt.weight * e;
            s2 += pt.weight * e * e;
            for d in 0..N {
                p1[d] += pt.weight * p[d];
                p2[d] += pt.weight * p[d] * p[d];
            }
        }
        let mean_h = s1 / w;
        let mean_h2 = s2 / w;
        let mean_p2: Vec<f64> = p2.iter().map(|v| v / w).collect();
        let var_p = (0..N).map(|d| mean_p2[d] - (p1[d] / w).powi(2)).collect();
        moments.push(ClassicalMoments {
            time: ensemble.time + (i * record_every) as f64 * run.dt,
            mean_h: Estimate {
                mean: mean_h,
                stderr: Estimate::from_samples(&h).stderr,
            },
            mean_h2,
            delta_e: (mean_h2 - mean_h * mean_h).max(0.0).sqrt(),
            mean_p2,
            var_p,
        });
    }
    let (final_points, reactive) = per.into_iter().map(|(p, r, _)| (p, r)).unzip();
    TrajectoryOutcome {
        final_points,
        reactive,
        moments,
    }
}
