use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{tridiagonal_eigen, Matrix};
use crate::lmg::hamiltonian::TridiagonalHamiltonian;
use crate::scalar::Real;

/// Eigen-decomposition of the LMG Hamiltonian.
///
/// Eigenvalues ascend. Column `k` of `eigenvectors` is the `k`-th eigenstate
/// in the Dicke basis, with the gauge fixed so that its largest-magnitude
/// component (lowest index on ties) is positive.
#[derive(Debug, Clone, Serialize)]
pub struct Spectrum<T> {
    pub eigenvalues: Vec<T>,
    pub eigenvectors: Matrix<T>,
    pub m_grid: Vec<T>,
    pub j_phys: T,
}

/// Residual bound relative to `||H||`: `1e-9` in double precision, looser for `f32`.
pub(crate) fn residual_tolerance<T: Real>(dim: usize) -> T {
    let floor = T::lit(1e-9);
    let scaled = T::lit(100.0) * T::of_usize(dim) * T::epsilon();
    floor.max(scaled)
}

/// Diagonalizes `h`, fixes the eigenvector gauge and checks every residual.
pub fn diagonalize<T: Real>(h: &TridiagonalHamiltonian<T>) -> Result<Spectrum<T>> {
    h.validate()?;
    let eig = tridiagonal_eigen(&h.diagonal, &h.off_diagonal)?;
    let dim = h.dim();
    let mut vectors = eig.vectors;
    for k in 0..dim {
        let mut best = 0;
        let mut best_abs = T::zero();
        for i in 0..dim {
            let a = vectors[(i, k)].abs();
            if a > best_abs {
                best = i;
                best_abs = a;
            }
        }
        if vectors[(best, k)] < T::zero() {
            for i in 0..dim {
                vectors[(i, k)] = -vectors[(i, k)];
            }
        }
    }

    let norm = h.norm_inf().max(T::min_positive_value());
    let bound = residual_tolerance::<T>(dim) * norm;
    let mut worst = T::zero();
    for k in 0..dim {
        let v = vectors.column(k);
        let hv = h.apply(&v);
        let e = eig.values[k];
        let r = hv
            .iter()
            .zip(&v)
            .map(|(&a, &b)| (a - e * b) * (a - e * b))
            .sum::<T>()
            .sqrt();
        if !r.is_finite() {
            return Err(Error::NonFinite("eigenvector residual"));
        }
        worst = worst.max(r);
    }
    if worst > bound {
        return Err(Error::EigenResidual {
            residual: worst.to_f64_lossy(),
            bound: bound.to_f64_lossy(),
        });
    }

    Ok(Spectrum {
        eigenvalues: eig.values,
        eigenvectors: vectors,
        m_grid: h.m_grid.clone(),
        j_phys: h.j_phys,
    })
}

impl<T: Real> Spectrum<T> {
    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    /// Eigenvector `k` in the Dicke basis.
    pub fn vector(&self, k: usize) -> Result<Vec<T>> {
        self.check_index(k)?;
        Ok(self.eigenvectors.column(k))
    }

    pub fn energy(&self, k: usize) -> Result<T> {
        self.check_index(k)?;
        Ok(self.eigenvalues[k])
    }

    /// Tunnel splitting `E1 - E0` in units of `J`.
    pub fn delta_e(&self) -> T {
        self.eigenvalues[1] - self.eigenvalues[0]
    }

    /// Tunnel splitting in rad/s.
    pub fn delta_e_rad_s(&self) -> T {
        self.delta_e() * self.j_phys
    }

    /// `E_k - E_0` in units of `J`.
    pub fn excitation(&self, k: usize) -> Result<T> {
        Ok(self.energy(k)? - self.eigenvalues[0])
    }

    /// `(E_k - E_0) / (E_1 - E_0)`.
    pub fn gap_ratio(&self, k: usize) -> Result<T> {
        Ok(self.excitation(k)? / self.delta_e())
    }

    pub(crate) fn check_index(&self, k: usize) -> Result<()> {
        if k >= self.dim() {
            return Err(Error::IndexOutOfRange {
                index: k,
                dim: self.dim(),
            });
        }
        Ok(())
    }
}
