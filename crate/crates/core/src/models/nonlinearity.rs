//! Characteristic potential length `chi_n = |V' / V^(n+1)|^(1/n)`.

use super::barrier::Barrier1D;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct NonlinearityReport {
    pub n: usize,
    /// `(x, chi_n(x))` at each probe point.
    pub chi: Vec<(f64, f64)>,
    /// Tail value `1 / 2 alpha`.
    pub reference: f64,
}

impl NonlinearityReport {
    /// Largest relative deviation from the reference over the probes.
    pub fn max_relative_deviation(&self) -> f64 {
        self.chi
            .iter()
            .map(|&(_, c)| (c / self.reference - 1.0).abs())
            .fold(0.0, f64::max)
    }
}

/// `chi_n` at one point, for odd `n`.
pub fn nonlinearity_length(barrier: &Barrier1D, n: usize, x: f64) -> Result<f64> {
    if n.is_multiple_of(2) {
        return Err(Error::Unsupported(format!("chi_n for even n = {n}")));
    }
    let d1 = barrier.nth_derivative(1, x);
    let dn = barrier.nth_derivative(n + 1, x);
    if d1 == 0.0 || dn == 0.0 {
        return Err(Error::InvalidParameter(format!(
            "derivative vanishes at x = {x}"
        )));
    }
    Ok((d1 / dn).abs().powf(1.0 / n as f64))
}

/// `chi_n` at tail probes `x = beta + s / alpha`, `s` in 10..=14, where each
/// derivative reduces to a factor `-2 alpha` and `chi_n -> 1 / 2 alpha`.
pub fn nonlinearity_report(barrier: &Barrier1D, n: usize) -> Result<NonlinearityReport> {
    let chi = (10..=14)
        .map(|s| {
            let x = barrier.beta + s as f64 / barrier.alpha;
            nonlinearity_length(barrier, n, x).map(|c| (x, c))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(NonlinearityReport {
        n,
        chi,
        reference: 0.5 / barrier.alpha,
    })
}

/// `V''' / V'` in closed form: `-4 alpha^2 (3 sech^2(alpha x) - 1)` for a single barrier.
pub fn third_to_first_ratio(alpha: f64, x: f64) -> f64 {
    let s = 1.0 / (alpha * x).cosh().powi(2);
    -4.0 * alpha * alpha * (3.0 * s - 1.0)
}
