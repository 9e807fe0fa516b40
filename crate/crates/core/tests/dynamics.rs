//! Convergence and moment laws of the propagators on the barrier problems.

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use decoscat_core::classical::{rk4_step, PhasePoint};
use decoscat_core::experiments::Scenario1D;
use decoscat_core::models::{Barrier1D, Harmonic, PotentialModel};
use decoscat_core::open::{realization_rng, DecoherenceSpec, QsdStepper, WienerIncrement};
use decoscat_core::qdyn::{
    build_gaussian, expectation_moments, Axis, GaussianPacketSpec, Grid, Hamiltonian,
    SplitOperator, WavefunctionState,
};

fn mean_x(s: &WavefunctionState) -> f64 {
    let g = &s.grid;
    s.amplitudes
        .iter()
        .enumerate()
        .map(|(i, a)| a.norm_sqr() * g.coordinate(i, 0))
        .sum::<f64>()
        * g.cell_volume()
        / s.norm_sq()
}

#[test]
fn split_operator_error_is_second_order() {
    let g = Grid::one_d(Axis::new(-12.8, 0.05, 512).unwrap());
    let ham = Hamiltonian::new(PotentialModel::one_d(Barrier1D::sbw()), 1.0, 0.1).unwrap();
    let psi = build_gaussian(
        &g,
        &GaussianPacketSpec::new(0.8, -3.0, 2.0).unwrap(),
        0.1,
        None,
    )
    .unwrap();
    let t = 2.0;
    let run = |dt: f64| {
        let mut op = SplitOperator::new(&g, &ham, dt).unwrap();
        let mut s = psi.clone();
        for _ in 0..(t / dt).round() as usize {
            op.step(&mut s);
        }
        mean_x(&s)
    };
    let reference = run(0.04 / 64.0);
    let errs: Vec<f64> = [0.04, 0.02, 0.01]
        .iter()
        .map(|&dt| (run(dt) - reference).abs())
        .collect();
    for w in errs.windows(2) {
        let order = (w[0] / w[1]).log2();
        assert!((order - 2.0).abs() < 0.2, "order {order}, errors {errs:?}");
    }
}

#[test]
fn harmonic_packet_follows_the_classical_orbit() {
    let g = Grid::one_d(Axis::new(-12.8, 0.05, 512).unwrap());
    let k = 1.0;
    let ham = Hamiltonian::new(
        PotentialModel::one_d(Harmonic {
            stiffness: k,
            centre: 0.0,
        }),
        1.0,
        0.1,
    )
    .unwrap();
    let (x0, p0) = (2.0, 0.5);
    let mut s = build_gaussian(
        &g,
        &GaussianPacketSpec::new(0.5, x0, p0).unwrap(),
        0.1,
        None,
    )
    .unwrap();
    let dt = 0.002;
    let period = 2.0 * std::f64::consts::PI;
    let mut op = SplitOperator::new(&g, &ham, dt).unwrap();
    let steps = (period / dt).round() as usize;
    for _ in 0..steps {
        op.step(&mut s);
    }
    let t = steps as f64 * dt;
    let xc = x0 * t.cos() + p0 * t.sin();
    let amp = (x0 * x0 + p0 * p0).sqrt();
    assert!(
        (mean_x(&s) - xc).abs() < 1e-3 * amp,
        "{} vs {xc}",
        mean_x(&s)
    );
}

/// Coarse increment over two fine steps: each coarse half is the sum of one
/// fine step's two halves.
fn coarsen(a: &WienerIncrement, b: &WienerIncrement) -> WienerIncrement {
    let mut w = WienerIncrement::zero(a.dt + b.dt, 1);
    w.halves[0] = [a.full(0), b.full(0)];
    w
}

fn fine_increment<R: Rng>(rng: &mut R, dt: f64) -> WienerIncrement {
    let s = 0.5 * dt.sqrt();
    let mut w = WienerIncrement::zero(dt, 1);
    for z in &mut w.halves[0] {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        *z = Complex64::new(s * re, s * im);
    }
    w
}

#[test]
fn qsd_halving_dt_moves_ensemble_means_less_than_the_error() {
    let g = Grid::one_d(Axis::new(-12.8, 0.05, 512).unwrap());
    let ham = Hamiltonian::new(PotentialModel::one_d(Barrier1D::sbw()), 1.0, 0.1).unwrap();
    let psi = build_gaussian(
        &g,
        &GaussianPacketSpec::new(0.8, -3.0, 1.5).unwrap(),
        0.1,
        None,
    )
    .unwrap();
    let dec = DecoherenceSpec::new(0.03, vec![0]).unwrap();
    let (dt, steps, n) = (0.01, 100, 500);
    let mut coarse = QsdStepper::new(&g, &ham, &dec, dt).unwrap();
    let mut fine = QsdStepper::new(&g, &ham, &dec, dt / 2.0).unwrap();
    let (mut xc, mut xf, mut hc, mut hf) = (Vec::new(), Vec::new(), Vec::new(), Vec::new());
    for k in 0..n {
        let mut rng = realization_rng(11, k as u64);
        let (mut a, mut b) = (psi.clone(), psi.clone());
        for _ in 0..steps {
            let w1 = fine_increment(&mut rng, dt / 2.0);
            let w2 = fine_increment(&mut rng, dt / 2.0);
            fine.step(&mut b, &w1).unwrap();
            fine.step(&mut b, &w2).unwrap();
            coarse.step(&mut a, &coarsen(&w1, &w2)).unwrap();
        }
        xc.push(mean_x(&a));
        xf.push(mean_x(&b));
        hc.push(expectation_moments(&a, &ham).unwrap().mean_h);
        hf.push(expectation_moments(&b, &ham).unwrap().mean_h);
    }
    let stats = |v: &[f64]| {
        let m = v.iter().sum::<f64>() / v.len() as f64;
        let var = v.iter().map(|x| (x - m).powi(2)).sum::<f64>() / (v.len() - 1) as f64;
        (m, (var / v.len() as f64).sqrt())
    };
    for (name, c, f) in [("<x>", &xc, &xf), ("<H>", &hc, &hf)] {
        let ((mc, _), (mf, sf)) = (stats(c), stats(f));
        assert!((mc - mf).abs() < sf, "{name}: {mc} vs {mf}, stderr {sf}");
    }
}

#[test]
fn langevin_halving_dt_moves_p_less_than_the_error() {
    // the library step is RK4 followed by a kick sqrt(2 D dt) xi; the two
    // fine kicks sum to the coarse one
    let s = Scenario1D::sbs();
    let setup = s.setup(2.0).unwrap();
    let ens = s.classical_ensemble(&setup, 10_000, 3);
    let (d, dt) = (0.03, 0.002);
    let steps = (setup.max_time / dt).ceil() as usize;
    let kick = (2.0 * d * dt / 2.0).sqrt();
    let (mut pc, mut pf) = (0usize, 0usize);
    for (k, p0) in ens.points.iter().enumerate() {
        let mut rng = realization_rng(3, k as u64);
        let (mut a, mut b): (PhasePoint<1>, PhasePoint<1>) = (*p0, *p0);
        let (mut ca, mut cb) = (false, false);
        for _ in 0..steps {
            let x1: f64 = rng.sample(StandardNormal);
            let x2: f64 = rng.sample(StandardNormal);
            b = rk4_step(&b, &s.barrier, s.mass, dt / 2.0);
            b.p[0] += kick * x1;
            b = rk4_step(&b, &s.barrier, s.mass, dt / 2.0);
            b.p[0] += kick * x2;
            a = rk4_step(&a, &s.barrier, s.mass, dt);
            a.p[0] += kick * (x1 + x2);
            ca |= a.q[0] > s.divider;
            cb |= b.q[0] > s.divider;
        }
        pc += ca as usize;
        pf += cb as usize;
    }
    let n = ens.points.len() as f64;
    let (pc, pf) = (pc as f64 / n, pf as f64 / n);
    let stderr = (pf * (1.0 - pf) / n).sqrt();
    assert!((pc - pf).abs() < stderr, "{pc} vs {pf}, stderr {stderr}");
}

#[test]
fn classical_moment_laws_before_the_collision() {
    let mut s = Scenario1D::sbs();
    let until = 2.0;
    s.max_time = Some(until);
    let d = 0.03;
    let r = s
        .classical(2.0, d, s.dt_classical, 100_000, 5, Some(0.25), None)
        .unwrap();
    let m = &r.moments;
    let last = m.len() - 1;
    assert!((m[last].time - until).abs() < 1e-9);
    let rate = (m[last].mean_h.mean - m[0].mean_h.mean) / m[last].time;
    assert!(
        (rate - d / s.mass).abs() < 0.1 * d / s.mass,
        "d<H>/dt {rate}"
    );
    let grow = m[last].delta_e.powi(2) - m[0].delta_e.powi(2);
    let expect: f64 = m
        .windows(2)
        .map(|w| {
            0.5 * (w[1].time - w[0].time) * 2.0 * d * (w[0].mean_p2[0] + w[1].mean_p2[0])
                / (s.mass * s.mass)
        })
        .sum();
    assert!(
        (grow - expect).abs() < 0.1 * expect,
        "dE^2 growth {grow} vs {expect}"
    );
}

#[test]
fn initial_widths_match_between_ensembles() {
    let cases = [
        (Scenario1D::sbw(), [0.6, 1.5, 2.5, 3.4]),
        (Scenario1D::sbs(), [1.4, 2.0, 2.6, 3.0]),
        (Scenario1D::db(1.0), [2.2, 2.6, 3.0, 3.0]),
        (Scenario1D::db(2.0), [2.0, 2.4, 2.8, 2.8]),
        (Scenario1D::db(3.0), [1.9, 2.3, 2.7, 2.7]),
    ];
    for (s, es) in cases {
        for e in es {
            let setup = s.setup(e).unwrap();
            let q =
                expectation_moments(&s.initial_state(&setup).unwrap(), &s.hamiltonian().unwrap())
                    .unwrap()
                    .delta_e;
            let (_, c) = s
                .classical_ensemble(&setup, 10_000, 1)
                .energy_moments(&s.barrier, s.mass);
            assert!(
                (q - c).abs() < 0.05 * q,
                "E={e}: quantum {q}, classical {c}"
            );
        }
    }
}
