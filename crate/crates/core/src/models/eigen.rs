//! Bound states on a 1D grid by dense diagonalisation of the Fourier-grid Hamiltonian.

use nalgebra::{DMatrix, SymmetricEigen};

use crate::qdyn::grid::Axis;

/// Eigenpairs sorted by energy. Vectors are normalised so that
/// `sum |phi|^2 dx = 1` and made positive at their largest component.
#[derive(Debug, Clone)]
pub struct Eigenstates {
    pub energies: Vec<f64>,
    pub vectors: Vec<Vec<f64>>,
}

/// Fourier-grid kinetic matrix `T_ij`, which depends only on `i - j`.
pub fn kinetic_matrix(axis: &Axis, mass: f64, hbar: f64) -> DMatrix<f64> {
    let n = axis.n;
    let t: Vec<f64> = axis
        .momenta(hbar)
        .iter()
        .map(|p| p * p / (2.0 * mass))
        .collect();
    let row: Vec<f64> = (0..n)
        .map(|d| {
            let s: f64 = (0..n)
                .map(|k| t[k] * (2.0 * std::f64::consts::PI * (k * d) as f64 / n as f64).cos())
                .sum();
            s / n as f64
        })
        .collect();
    DMatrix::from_fn(n, n, |i, j| row[i.abs_diff(j)])
}

/// Lowest `count` eigenstates of `p^2/2m + V` with `V` sampled on `axis`.
pub fn grid_eigenstates(
    axis: &Axis,
    potential: &[f64],
    mass: f64,
    hbar: f64,
    count: usize,
) -> Eigenstates {
    let mut h = kinetic_matrix(axis, mass, hbar);
    for (i, v) in potential.iter().enumerate() {
        h[(i, i)] += v;
    }
    let eig = SymmetricEigen::new(h);
    let mut order: Vec<usize> = (0..axis.n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let scale = 1.0 / axis.dx.sqrt();
    let mut energies = Vec::new();
    let mut vectors = Vec::new();
    for &k in order.iter().take(count) {
        energies.push(eig.eigenvalues[k]);
        let col = eig.eigenvectors.column(k);
        let peak = col
            .iter()
            .fold(0.0f64, |m, &v| if v.abs() > m.abs() { v } else { m });
        let sign = peak.signum() * scale;
        vectors.push(col.iter().map(|v| v * sign).collect());
    }
    Eigenstates { energies, vectors }
}
