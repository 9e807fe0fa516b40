//! `sech^2` single and double barriers.

use super::potential::Potential1D;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BarrierKind {
    Single,
    Double,
}

/// `V_SB(x) = V0 sech^2(alpha x)`, `V_DB(x) = V_SB(x - beta) + V_SB(x + beta)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Barrier1D {
    pub kind: BarrierKind,
    pub v0: f64,
    pub alpha: f64,
    pub beta: f64,
}

/// Coefficients of `Q_k(t)` with `d^k/dx^k sech^2(alpha x) = alpha^k sech^2 Q_k(tanh)`.
/// `Q_0 = 1`, `Q_{k+1} = -2 t Q_k + (1 - t^2) Q_k'`.
fn sech2_derivative_poly(k: usize) -> Vec<f64> {
    let mut q = vec![1.0];
    for _ in 0..k {
        let mut next = vec![0.0; q.len() + 1];
        for (i, &c) in q.iter().enumerate() {
            next[i + 1] -= 2.0 * c;
            if i > 0 {
                let dc = i as f64 * c;
                next[i - 1] += dc;
                next[i + 1] -= dc;
            }
        }
        q = next;
    }
    q
}

fn horner(coeffs: &[f64], t: f64) -> f64 {
    coeffs.iter().rev().fold(0.0, |acc, &c| acc * t + c)
}

fn sech2(z: f64) -> f64 {
    // 4 e^{-2|z|} / (1 + e^{-2|z|})^2 stays finite for large |z|
    let e = (-2.0 * z.abs()).exp();
    4.0 * e / ((1.0 + e) * (1.0 + e))
}

impl Barrier1D {
    pub fn single(v0: f64, alpha: f64) -> Self {
        Self {
            kind: BarrierKind::Single,
            v0,
            alpha,
            beta: 0.0,
        }
    }

    pub fn double(v0: f64, alpha: f64, beta: f64) -> Self {
        Self {
            kind: BarrierKind::Double,
            v0,
            alpha,
            beta,
        }
    }

    /// Weak single barrier: alpha = 0.5, height 2.
    pub fn sbw() -> Self {
        Self::single(2.0, 0.5)
    }

    /// Strong single barrier: alpha = 10, height 2.
    pub fn sbs() -> Self {
        Self::single(2.0, 10.0)
    }

    /// Double barrier alpha = 10, beta = 0.1 with global maximum 2.
    pub fn db() -> Self {
        let v0 = calibrate_v0(BarrierKind::Double, 10.0, 0.1, 2.0);
        Self::double(v0, 10.0, 0.1)
    }

    fn centres(&self) -> &'static [f64] {
        match self.kind {
            BarrierKind::Single => &[0.0],
            BarrierKind::Double => &[1.0, -1.0],
        }
    }

    /// k-th derivative, evaluated in closed form.
    pub fn nth_derivative(&self, k: usize, x: f64) -> f64 {
        let q = sech2_derivative_poly(k);
        let scale = self.v0 * self.alpha.powi(k as i32);
        self.centres()
            .iter()
            .map(|c| {
                let z = self.alpha * (x - c * self.beta);
                scale * sech2(z) * horner(&q, z.tanh())
            })
            .sum()
    }

    /// Position and value of the global maximum.
    pub fn peak(&self) -> (f64, f64) {
        match self.kind {
            BarrierKind::Single => (0.0, self.v0),
            BarrierKind::Double => {
                let x = maximise(|x| self.value(x), 0.0, self.beta + 3.0 / self.alpha);
                let (v0, vx) = (self.value(0.0), self.value(x));
                if v0 >= vx {
                    (0.0, v0)
                } else {
                    (x, vx)
                }
            }
        }
    }

    /// First point `x > 0` beyond which `V < rel * peak`.
    pub fn divider(&self, rel: f64) -> f64 {
        let (_, peak) = self.peak();
        // V ~ n 4 V0 e^{-2 alpha (x - beta)} in the tail
        let n = self.centres().len() as f64;
        let mut x = self.beta + (4.0 * n * self.v0 / (rel * peak)).ln() / (2.0 * self.alpha);
        while self.value(x) > rel * peak {
            x += 0.1 / self.alpha;
        }
        x
    }
}

impl Potential1D for Barrier1D {
    fn value(&self, x: f64) -> f64 {
        self.centres()
            .iter()
            .map(|c| self.v0 * sech2(self.alpha * (x - c * self.beta)))
            .sum()
    }

    fn derivative(&self, x: f64) -> f64 {
        self.centres()
            .iter()
            .map(|c| {
                let z = self.alpha * (x - c * self.beta);
                -2.0 * self.alpha * self.v0 * sech2(z) * z.tanh()
            })
            .sum()
    }
}

/// Scan on a fine grid, then golden-section refinement, for the maximum of `f` on `[lo, hi]`.
pub(crate) fn maximise<F: Fn(f64) -> f64>(f: F, lo: f64, hi: f64) -> f64 {
    let n = 2000;
    let h = (hi - lo) / n as f64;
    let best = (0..=n)
        .map(|i| lo + i as f64 * h)
        .fold((lo, f64::NEG_INFINITY), |b, x| {
            let v = f(x);
            if v > b.1 {
                (x, v)
            } else {
                b
            }
        })
        .0;
    let (mut a, mut b) = ((best - h).max(lo), (best + h).min(hi));
    let r = 0.5 * (5f64.sqrt() - 1.0);
    let mut c = b - r * (b - a);
    let mut d = a + r * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    while b - a > 1e-13 * (1.0 + best.abs()) {
        if fc > fd {
            b = d;
            d = c;
            fd = fc;
            c = b - r * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + r * (b - a);
            fd = f(d);
        }
    }
    0.5 * (a + b)
}

/// `V0` giving a global maximum of `target_peak`.
pub fn calibrate_v0(kind: BarrierKind, alpha: f64, beta: f64, target_peak: f64) -> f64 {
    let unit = Barrier1D {
        kind,
        v0: 1.0,
        alpha,
        beta,
    };
    target_peak / unit.peak().1
}
