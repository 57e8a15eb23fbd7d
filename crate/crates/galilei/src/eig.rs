//! Self-contained symmetric tridiagonal eigensolver (implicit QL with
//! shifts), plus the spectral decomposition of 1-D grid Hamiltonians built
//! from it.
//!
//! The Hamiltonian discretization is the standard central-difference
//! Dirichlet form: `H = −ħ²/(2m)·∂²ₓ + U` becomes a symmetric tridiagonal
//! matrix with diagonal `ħ²/(m·Δx²) + U(x_i)` and off-diagonal
//! `−ħ²/(2m·Δx²)`. Its exact eigenbasis (for `U = 0`) is known in closed
//! form, which the tests use to validate the solver.

use num_complex::Complex64;

use crate::grid::{PropagatorMatrix, SpatialGrid, WaveFunction, C64, I};
use crate::{Error, Result};

/// Eigendecomposition of a real symmetric tridiagonal matrix.
/// `eigenvectors` is column-major: column `j` (eigenvector `j`) occupies
/// `eigenvectors[j*n .. (j+1)*n]`.
#[derive(Clone, Debug)]
pub struct Eigendecomposition {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: Vec<f64>,
}

/// Implicit-QL eigensolve of the symmetric tridiagonal matrix with diagonal
/// `d` and subdiagonal `e` (`e[i]` couples rows `i` and `i+1`). Returns all
/// eigenvalues ascending with orthonormal eigenvectors.
pub fn eigh_tridiagonal(d: &[f64], e: &[f64]) -> Result<Eigendecomposition> {
    let n = d.len();
    if n == 0 {
        return Err(Error::InvalidArgument("empty matrix".into()));
    }
    if e.len() != n.saturating_sub(1) {
        return Err(Error::Dimension(format!(
            "subdiagonal length {} for size {}",
            e.len(),
            n
        )));
    }
    let mut d = d.to_vec();
    // workspace subdiagonal with a trailing scratch slot
    let mut ee = vec![0.0f64; n];
    ee[..n - 1].copy_from_slice(e);
    // eigenvector accumulator, column-major identity
    let mut z = vec![0.0f64; n * n];
    for j in 0..n {
        z[j * n + j] = 1.0;
    }

    for l in 0..n {
        let mut iter = 0;
        loop {
            // locate a negligible subdiagonal element
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if ee[m].abs() <= f64::EPSILON * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            if iter > 50 {
                return Err(Error::Numerical(
                    "tridiagonal QL failed to converge in 50 iterations".into(),
                ));
            }
            // implicit shift from the 2×2 at the top of the block
            let mut g = (d[l + 1] - d[l]) / (2.0 * ee[l]);
            let mut r = g.hypot(1.0);
            g = d[m] - d[l] + ee[l] / (g + r.copysign(g));
            let mut s = 1.0f64;
            let mut c = 1.0f64;
            let mut p = 0.0f64;
            let mut underflow = false;
            for i in (l..m).rev() {
                let mut f = s * ee[i];
                let b = c * ee[i];
                r = f.hypot(g);
                ee[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    ee[m] = 0.0;
                    underflow = i > l;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
                // rotate eigenvector columns i and i+1 (both contiguous)
                let (lo, hi) = z.split_at_mut((i + 1) * n);
                let col_i = &mut lo[i * n..];
                let col_j = &mut hi[..n];
                for (zi, zj) in col_i.iter_mut().zip(col_j.iter_mut()) {
                    f = *zj;
                    *zj = s * *zi + c * f;
                    *zi = c * *zi - s * f;
                }
            }
            if underflow {
                continue;
            }
            d[l] -= p;
            ee[l] = g;
            ee[m] = 0.0;
        }
    }

    // sort ascending, permuting eigenvector columns
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| d[a].partial_cmp(&d[b]).unwrap());
    let eigenvalues: Vec<f64> = order.iter().map(|&j| d[j]).collect();
    let mut eigenvectors = vec![0.0f64; n * n];
    for (jnew, &jold) in order.iter().enumerate() {
        eigenvectors[jnew * n..(jnew + 1) * n].copy_from_slice(&z[jold * n..(jold + 1) * n]);
    }
    Ok(Eigendecomposition {
        eigenvalues,
        eigenvectors,
    })
}

/// Spectral decomposition of a 1-D grid Hamiltonian.
#[derive(Clone, Debug)]
pub struct SpectralHamiltonian {
    pub grid: SpatialGrid,
    pub hbar: f64,
    pub eigenvalues: Vec<f64>,
    /// Column-major orthonormal eigenvectors.
    pub eigenvectors: Vec<f64>,
}

impl SpectralHamiltonian {
    /// Diagonalize `H = −ħ²/(2m)∂²ₓ + U` with Dirichlet central differences,
    /// `U` given pointwise.
    pub fn build<F: Fn(f64) -> f64>(
        grid: SpatialGrid,
        mass: f64,
        hbar: f64,
        potential: F,
    ) -> Result<Self> {
        if mass <= 0.0 || hbar <= 0.0 {
            return Err(Error::InvalidArgument("mass and ħ must be positive".into()));
        }
        let n = grid.npoints;
        let c = hbar * hbar / (2.0 * mass * grid.dx * grid.dx);
        let d: Vec<f64> = (0..n).map(|i| 2.0 * c + potential(grid.x(i))).collect();
        let e = vec![-c; n - 1];
        let eig = eigh_tridiagonal(&d, &e)?;
        Ok(SpectralHamiltonian {
            grid,
            hbar,
            eigenvalues: eig.eigenvalues,
            eigenvectors: eig.eigenvectors,
        })
    }

    /// `Vᵀ·ψ` (projection onto the eigenbasis).
    fn project(&self, values: &[C64]) -> Vec<C64> {
        let n = self.grid.npoints;
        (0..n)
            .map(|j| {
                let col = &self.eigenvectors[j * n..(j + 1) * n];
                let mut acc = C64::new(0.0, 0.0);
                for (v, p) in col.iter().zip(values) {
                    acc += p * *v;
                }
                acc
            })
            .collect()
    }

    /// `V·φ` (synthesis from eigenbasis coefficients).
    fn synthesize(&self, coeff: &[C64]) -> Vec<C64> {
        let n = self.grid.npoints;
        let mut out = vec![C64::new(0.0, 0.0); n];
        for (j, cj) in coeff.iter().enumerate() {
            if cj.norm_sqr() == 0.0 {
                continue;
            }
            let col = &self.eigenvectors[j * n..(j + 1) * n];
            for (o, v) in out.iter_mut().zip(col) {
                *o += cj * *v;
            }
        }
        out
    }

    /// Evolve `ψ ↦ V·exp(−iΛT/ħ)·Vᵀ·ψ` (exact for the discrete Hamiltonian).
    pub fn evolve(&self, psi: &WaveFunction, t_span: f64) -> Result<WaveFunction> {
        if psi.grid != self.grid {
            return Err(Error::Dimension("ψ grid differs from Hamiltonian grid".into()));
        }
        let mut coeff = self.project(&psi.values);
        for (cj, &w) in coeff.iter_mut().zip(&self.eigenvalues) {
            *cj *= (-I * (w * t_span / self.hbar)).exp();
        }
        WaveFunction::new(self.grid, self.synthesize(&coeff))
    }

    /// Dense propagator kernel `V·exp(−iΛT/ħ)·Vᵀ / Δx`.
    pub fn kernel(&self, t_span: f64) -> PropagatorMatrix {
        let n = self.grid.npoints;
        let phases: Vec<C64> = self
            .eigenvalues
            .iter()
            .map(|&w| (-I * (w * t_span / self.hbar)).exp())
            .collect();
        // K = Σ_j phase_j · col_j ⊗ col_j / Δx, accumulated row-wise
        let mut data = vec![Complex64::new(0.0, 0.0); n * n];
        for (j, ph) in phases.iter().enumerate() {
            let col = &self.eigenvectors[j * n..(j + 1) * n];
            for (i, &vi) in col.iter().enumerate() {
                if vi == 0.0 {
                    continue;
                }
                let scale = ph * vi;
                let row = &mut data[i * n..(i + 1) * n];
                for (r, &vj) in row.iter_mut().zip(col.iter()) {
                    *r += scale * vj;
                }
            }
        }
        let inv = 1.0 / self.grid.dx;
        for v in &mut data {
            *v *= inv;
        }
        let mut k = PropagatorMatrix::new(self.grid, data, "spectral").unwrap();
        k.aliasing_warning = false;
        k
    }
}
