//! Dense-matrix check of the double-commutator trace identities
//! `Tr(O [x, [x, rho]])` used to derive the moment laws.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;
use rand_distr::{Distribution, Uniform};

use crate::qdyn::grid::Axis;

type CMat = DMatrix<Complex64>;

#[derive(Debug, Clone, PartialEq)]
pub struct TraceIdentity {
    pub name: &'static str,
    pub computed: f64,
    pub expected: f64,
    /// `|computed - expected| / max(|expected|, hbar^2 rms(O))`.
    pub relative_residual: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TraceReport {
    pub identities: Vec<TraceIdentity>,
}

impl TraceReport {
    pub fn max_relative_residual(&self) -> f64 {
        self.identities
            .iter()
            .map(|i| i.relative_residual)
            .fold(0.0, f64::max)
    }
}

/// Operator diagonal in momentum: `(1/n) sum_k f(p_k) e^{i k (x_i - x_j)}`.
fn momentum_operator(axis: &Axis, hbar: f64, f: impl Fn(f64) -> f64) -> CMat {
    let n = axis.n;
    let p = axis.momenta(hbar);
    let row: Vec<Complex64> = (0..n)
        .map(|d| {
            let mut acc = Complex64::new(0.0, 0.0);
            for (k, pk) in p.iter().enumerate() {
                let ph = 2.0 * std::f64::consts::PI * ((k * d) % n) as f64 / n as f64;
                acc += Complex64::from_polar(f(*pk), ph);
            }
            acc / n as f64
        })
        .collect();
    // entry (i, j) depends on (i - j) mod n
    DMatrix::from_fn(n, n, |i, j| row[(i + n - j) % n])
}

fn diagonal(v: &[f64]) -> CMat {
    let n = v.len();
    DMatrix::from_fn(n, n, |i, j| {
        if i == j {
            Complex64::new(v[i], 0.0)
        } else {
            Complex64::new(0.0, 0.0)
        }
    })
}

fn trace_product(a: &CMat, b: &CMat) -> Complex64 {
    let n = a.nrows();
    let mut acc = Complex64::new(0.0, 0.0);
    for i in 0..n {
        for k in 0..n {
            acc += a[(i, k)] * b[(k, i)];
        }
    }
    acc
}

/// Unit-trace mixture of `n_states` Gaussian packets with random weights,
/// centres and momenta, kept well inside both the position and momentum
/// ranges of `axis`.
pub fn random_density<R: Rng + ?Sized>(
    axis: &Axis,
    hbar: f64,
    n_states: usize,
    rng: &mut R,
) -> CMat {
    let n = axis.n;
    // width balancing the position and momentum ranges
    let sigma = axis.dx * (n as f64 / (4.0 * std::f64::consts::PI)).sqrt();
    let sigma_p = hbar / (2.0 * sigma);
    let centre = axis.x_min + 0.5 * n as f64 * axis.dx;
    let u = Uniform::new(-3.0, 3.0).expect("valid range");
    let mut rho = CMat::zeros(n, n);
    let mut wsum = 0.0;
    for _ in 0..n_states {
        let x0 = centre + sigma * u.sample(rng);
        let p0 = sigma_p * u.sample(rng);
        let s = sigma * (0.8 + 0.4 * rng.random::<f64>());
        let w: f64 = rng.random::<f64>() + 0.1;
        let psi: Vec<Complex64> = axis
            .positions()
            .iter()
            .map(|&x| {
                Complex64::from_polar((-(x - x0).powi(2) / (4.0 * s * s)).exp(), p0 * x / hbar)
            })
            .collect();
        let norm: f64 = psi.iter().map(|z| z.norm_sqr()).sum();
        for i in 0..n {
            for j in 0..n {
                rho[(i, j)] += psi[i] * psi[j].conj() * (w / norm);
            }
        }
        wsum += w;
    }
    rho / Complex64::new(wsum, 0.0)
}

/// Evaluates the seven identities for density matrix `rho` (in the grid
/// basis, unit trace) and potential `v` sampled on `axis`.
pub fn verify_trace_identities(axis: &Axis, hbar: f64, v: &[f64], rho: &CMat) -> TraceReport {
    let xs = axis.positions();
    let x = diagonal(&xs);
    let vm = diagonal(v);
    let v2 = diagonal(&v.iter().map(|a| a * a).collect::<Vec<_>>());
    let p1 = momentum_operator(axis, hbar, |p| p);
    let p2 = momentum_operator(axis, hbar, |p| p * p);
    let p4 = momentum_operator(axis, hbar, |p| p.powi(4));
    let pv = &p2 * &vm + &vm * &p2;

    let inner = &x * rho - rho * &x;
    let dc = &x * &inner - &inner * &x;
    let mean = |o: &CMat| trace_product(o, rho).re;
    let mean_p2 = mean(&p2);
    let mean_v = mean(&vm);
    let h2 = hbar * hbar;

    let cases: Vec<(&'static str, &CMat, f64, f64)> = vec![
        ("x", &x, 0.0, mean(&(&x * &x)).sqrt()),
        ("V", &vm, 0.0, mean(&v2).sqrt()),
        ("V^2", &v2, 0.0, mean(&(&v2 * &v2)).sqrt()),
        ("p", &p1, 0.0, mean_p2.sqrt()),
        ("p^2", &p2, -2.0 * h2, 0.0),
        ("p^4", &p4, -12.0 * h2 * mean_p2, 0.0),
        ("p^2 V + V p^2", &pv, -4.0 * h2 * mean_v, 0.0),
    ];
    let identities = cases
        .into_iter()
        .map(|(name, o, expected, rms)| {
            let computed = trace_product(o, &dc).re;
            let scale = expected.abs().max(h2 * rms);
            TraceIdentity {
                name,
                computed,
                expected,
                relative_residual: (computed - expected).abs() / scale,
            }
        })
        .collect();
    TraceReport { identities }
}
