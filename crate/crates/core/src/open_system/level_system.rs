use serde::Serialize;

use crate::error::{invalid, Error, Result};
use crate::linalg::Matrix;
use crate::lmg::{eigenbasis_element, Spectrum};
use crate::scalar::Real;

/// Largest supported truncation.
pub const MAX_LEVELS: usize = 10;

/// The lowest `n` energy eigenstates together with the operators needed for
/// dephasing dynamics and sign measurements, all in the energy basis.
#[derive(Debug, Clone, Serialize)]
pub struct LevelSystem<T> {
    pub n_levels: usize,
    /// Eigenvalues `E_0 .. E_{n-1}` in units of `J`.
    pub h_diag: Vec<T>,
    /// `<E_i| Jz |E_j>`.
    pub jz: Matrix<T>,
    /// `<E_i| sgn(Jz) |E_j>`.
    pub q: Matrix<T>,
    /// Operator entering the anticommutator of the dissipator. Defaults to
    /// the truncated square `jz * jz`.
    pub jz2: Matrix<T>,
    /// `E_1 - E_0` in units of `J`.
    pub delta_e: T,
    pub j_phys: T,
}

/// Projects the spectrum onto its lowest `n_levels` eigenstates.
pub fn truncate<T: Real>(
    spec: &Spectrum<T>,
    q_diag: &[T],
    n_levels: usize,
) -> Result<LevelSystem<T>> {
    if n_levels < 2 || n_levels > MAX_LEVELS.min(spec.dim()) {
        return Err(invalid(
            "n_levels",
            format!(
                "must lie in 2..={}, got {n_levels}",
                MAX_LEVELS.min(spec.dim())
            ),
        ));
    }
    if q_diag.len() != spec.dim() {
        return Err(Error::DimensionMismatch {
            expected: spec.dim(),
            found: q_diag.len(),
        });
    }
    let mut jz = Matrix::zeros(n_levels, n_levels);
    let mut q = Matrix::zeros(n_levels, n_levels);
    for i in 0..n_levels {
        for j in i..n_levels {
            let z = eigenbasis_element(spec, &spec.m_grid, i, j)?;
            let s = eigenbasis_element(spec, q_diag, i, j)?;
            jz[(i, j)] = z;
            jz[(j, i)] = z;
            q[(i, j)] = s;
            q[(j, i)] = s;
        }
    }
    let jz2 = jz.matmul(&jz);
    Ok(LevelSystem {
        n_levels,
        h_diag: spec.eigenvalues[..n_levels].to_vec(),
        jz,
        q,
        jz2,
        delta_e: spec.delta_e(),
        j_phys: spec.j_phys,
    })
}

impl<T: Real> LevelSystem<T> {
    /// Replaces the dissipator's `Jz^2` by the projection `P Jz^2 P` of the
    /// full-space operator instead of the square of the truncated `Jz`.
    pub fn with_projected_jz2(mut self, spec: &Spectrum<T>) -> Result<Self> {
        let m2: Vec<T> = spec.m_grid.iter().map(|&m| m * m).collect();
        let n = self.n_levels;
        let mut jz2 = Matrix::zeros(n, n);
        for i in 0..n {
            for j in i..n {
                let v = eigenbasis_element(spec, &m2, i, j)?;
                jz2[(i, j)] = v;
                jz2[(j, i)] = v;
            }
        }
        self.jz2 = jz2;
        Ok(self)
    }

    /// Largest of `|jz_ii|`, `|q_00|`, `|q_11|`; zero at `h = 0` by parity.
    pub fn parity_defect(&self) -> T {
        let diag = (0..self.n_levels)
            .map(|i| self.jz[(i, i)].abs())
            .fold(T::zero(), T::max);
        diag.max(self.q[(0, 0)].abs()).max(self.q[(1, 1)].abs())
    }

    /// Converts a rate in s^-1 into units of `J`.
    pub fn dimensionless_rate(&self, gamma_per_s: T) -> T {
        gamma_per_s / self.j_phys
    }

    /// Dimensionless Hamiltonian, diagonal in this basis.
    pub fn hamiltonian(&self) -> Matrix<T> {
        Matrix::from_diagonal(&self.h_diag)
    }

    /// `Q` with every element outside the ground-doublet block zeroed.
    pub fn doublet_q(&self) -> Matrix<T> {
        Matrix::from_fn(self.n_levels, self.n_levels, |i, j| {
            if i < 2 && j < 2 {
                self.q[(i, j)]
            } else {
                T::zero()
            }
        })
    }
}
