//! Transmission through `sech^2` barriers: closed form, packet average, and a
//! stationary-scattering integrator usable for any 1D potential.

use num_complex::Complex64;

use super::potential::Potential1D;
use crate::error::{Error, Result};

/// `ln(sinh z)` for `z > 0` without overflow.
fn ln_sinh(z: f64) -> f64 {
    if z < 20.0 {
        z.sinh().ln()
    } else {
        z + (-(-2.0 * z).exp()).ln_1p() - std::f64::consts::LN_2
    }
}

/// `ln(cosh z)` without overflow.
fn ln_cosh(z: f64) -> f64 {
    let z = z.abs();
    z + (-2.0 * z).exp().ln_1p() - std::f64::consts::LN_2
}

/// `c^2 = 8 m V0 / (hbar alpha)^2`.
pub fn c_squared(m: f64, hbar: f64, v0: f64, alpha: f64) -> f64 {
    8.0 * m * v0 / (hbar * hbar * alpha * alpha)
}

/// Exact transmission of `V0 sech^2(alpha x)` at momentum `p0`:
/// `sinh^2(a) / (sinh^2(a) + cosh^2(b))`, `a = pi p0 / hbar alpha`,
/// `b = (pi / 2) sqrt(c^2 - 1)`.
pub fn analytic_transmission(p0: f64, m: f64, hbar: f64, v0: f64, alpha: f64) -> Result<f64> {
    let c2 = c_squared(m, hbar, v0, alpha);
    if !(c2 > 1.0) {
        return Err(Error::TransmissionBranch { c_squared: c2 });
    }
    if p0 <= 0.0 {
        return Ok(0.0);
    }
    let a = std::f64::consts::PI * p0 / (hbar * alpha);
    let b = std::f64::consts::FRAC_PI_2 * (c2 - 1.0).sqrt();
    // P = 1 / (1 + cosh^2 b / sinh^2 a)
    let log_ratio = 2.0 * (ln_cosh(b) - ln_sinh(a));
    Ok(if log_ratio > 0.0 {
        let e = (-log_ratio).exp();
        e / (1.0 + e)
    } else {
        1.0 / (1.0 + log_ratio.exp())
    })
}

/// Closed-form transmission averaged over the momentum distribution of a
/// Gaussian packet with centre `p0` and spread `sigma_p`.
pub fn packet_averaged_transmission(
    p0: f64,
    sigma_p: f64,
    m: f64,
    hbar: f64,
    v0: f64,
    alpha: f64,
) -> Result<f64> {
    if sigma_p == 0.0 {
        return analytic_transmission(p0, m, hbar, v0, alpha);
    }
    let n = 4000;
    let lo = p0 - 10.0 * sigma_p;
    let h = 20.0 * sigma_p / n as f64;
    let mut acc = 0.0;
    let mut wsum = 0.0;
    for i in 0..=n {
        let p = lo + i as f64 * h;
        let w = (-(p - p0).powi(2) / (2.0 * sigma_p * sigma_p)).exp()
            * if i == 0 || i == n { 0.5 } else { 1.0 };
        acc += w * analytic_transmission(p, m, hbar, v0, alpha)?;
        wsum += w;
    }
    Ok(acc / wsum)
}

/// Transmission at energy `e` from integrating the stationary Schrodinger
/// equation with RK4 from a pure outgoing wave at `x_right` back to `x_left`.
/// The potential must be negligible outside `[x_left, x_right]`.
pub fn stationary_transmission<P: Potential1D + ?Sized>(
    pot: &P,
    m: f64,
    hbar: f64,
    e: f64,
    x_left: f64,
    x_right: f64,
    steps: usize,
) -> f64 {
    let k = (2.0 * m * e).sqrt() / hbar;
    let i = Complex64::new(0.0, 1.0);
    let f = |x: f64| 2.0 * m * (pot.value(x) - e) / (hbar * hbar);
    // y = (psi, psi')
    let mut psi = (i * k * x_right).exp();
    let mut dpsi = i * k * psi;
    let h = -(x_right - x_left) / steps as f64;
    let mut x = x_right;
    for _ in 0..steps {
        let (f0, fm, f1) = (f(x), f(x + 0.5 * h), f(x + h));
        let k1 = (dpsi, f0 * psi);
        let k2 = (dpsi + 0.5 * h * k1.1, fm * (psi + 0.5 * h * k1.0));
        let k3 = (dpsi + 0.5 * h * k2.1, fm * (psi + 0.5 * h * k2.0));
        let k4 = (dpsi + h * k3.1, f1 * (psi + h * k3.0));
        psi += h / 6.0 * (k1.0 + 2.0 * k2.0 + 2.0 * k3.0 + k4.0);
        dpsi += h / 6.0 * (k1.1 + 2.0 * k2.1 + 2.0 * k3.1 + k4.1);
        x += h;
    }
    // psi = A e^{ikx} + B e^{-ikx} at x_left
    let incoming = 0.5 * (psi + dpsi / (i * k)) * (-i * k * x).exp();
    1.0 / incoming.norm_sqr()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::barrier::Barrier1D;

    #[test]
    fn branch_and_limits() {
        assert!(matches!(
            analytic_transmission(1.0, 1.0, 1.0, 0.1, 1.0),
            Err(Error::TransmissionBranch { .. })
        ));
        assert_eq!(
            analytic_transmission(0.0, 1.0, 0.1, 2.0, 10.0).unwrap(),
            0.0
        );
        assert!((c_squared(1.0, 0.1, 2.0, 0.5) - 6400.0).abs() < 1e-9);
        assert!((c_squared(1.0, 0.1, 2.0, 10.0) - 16.0).abs() < 1e-12);
        // no overflow for huge arguments
        let p = analytic_transmission(3.0, 1.0, 0.1, 2.0, 0.5).unwrap();
        assert!(p.is_finite() && p > 0.99);
    }

    #[test]
    fn sbs_values() {
        let p = analytic_transmission(2.0, 1.0, 0.1, 2.0, 10.0).unwrap();
        assert!((p - 0.5985).abs() < 5e-4, "{p}");
    }

    #[test]
    fn stationary_integrator_matches_closed_form() {
        let b = Barrier1D::sbs();
        for e in [1.4f64, 2.0, 3.0] {
            let exact = analytic_transmission((2.0 * e).sqrt(), 1.0, 0.1, 2.0, 10.0).unwrap();
            let num = stationary_transmission(&b, 1.0, 0.1, e, -2.5, 2.5, 20000);
            assert!((exact - num).abs() < 1e-6, "E={e}: {exact} vs {num}");
        }
    }
}
