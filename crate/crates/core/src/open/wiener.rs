//! Complex Wiener increments and per-realization random streams.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

/// Stream for realization `k`: ChaCha8 keyed by the master seed, with `k` as the
/// stream id. Streams for different `k` never overlap.
pub fn realization_rng(master_seed: u64, k: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(master_seed);
    rng.set_stream(k);
    rng
}

/// Complex increments for one step, one entry per coupling. Each entry holds the
/// two half-step increments; their sum is the full-step `dW`.
#[derive(Debug, Clone, PartialEq)]
pub struct WienerIncrement {
    pub dt: f64,
    pub halves: Vec<[Complex64; 2]>,
}

impl WienerIncrement {
    pub fn zero(dt: f64, couplings: usize) -> Self {
        Self {
            dt,
            halves: vec![[Complex64::new(0.0, 0.0); 2]; couplings],
        }
    }

    /// Full-step increment of coupling `m`.
    pub fn full(&self, m: usize) -> Complex64 {
        self.halves[m][0] + self.halves[m][1]
    }

    pub fn negated(&self) -> Self {
        Self {
            dt: self.dt,
            halves: self.halves.iter().map(|h| [-h[0], -h[1]]).collect(),
        }
    }
}

/// Increments with `E[dW] = 0`, `E[dW dW*] = dt`, `E[dW dW] = 0`.
pub fn draw_wiener<R: Rng + ?Sized>(rng: &mut R, dt: f64, couplings: usize) -> WienerIncrement {
    // each real component of a half step has variance dt / 4
    let s = 0.5 * dt.sqrt();
    let mut halves = Vec::with_capacity(couplings);
    for _ in 0..couplings {
        let mut h = [Complex64::new(0.0, 0.0); 2];
        for z in &mut h {
            let re: f64 = rng.sample(StandardNormal);
            let im: f64 = rng.sample(StandardNormal);
            *z = Complex64::new(s * re, s * im);
        }
        halves.push(h);
    }
    WienerIncrement { dt, halves }
}
