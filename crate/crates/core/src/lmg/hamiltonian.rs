use crate::error::{invalid, Result};
use crate::linalg::Matrix;
use crate::params::ModelParams;
use crate::scalar::Real;

/// The LMG Hamiltonian as a real symmetric tridiagonal matrix in the Dicke basis.
#[derive(Debug, Clone, PartialEq)]
pub struct TridiagonalHamiltonian<T> {
    /// `-(2/N) m_i^2 - 2 h m_i`
    pub diagonal: Vec<T>,
    /// `-Gamma sqrt(j(j+1) - m_i(m_i+1))`, coupling `m_i` and `m_i + 1`
    pub off_diagonal: Vec<T>,
    /// `-N/2, ..., N/2`
    pub m_grid: Vec<T>,
    /// rad/s per unit of `J`, carried through for unit conversion downstream
    pub j_phys: T,
}

/// Assembles the tridiagonal LMG Hamiltonian for `params`.
pub fn build_hamiltonian<T: Real>(params: &ModelParams<T>) -> Result<TridiagonalHamiltonian<T>> {
    let params = params.validated()?;
    let n = params.n_spins;
    let big_n = params.n();
    let jt = big_n / T::lit(2.0);
    let two = T::lit(2.0);
    let m_grid: Vec<T> = (0..=n).map(|i| T::of_usize(i) - jt).collect();
    let diagonal = m_grid
        .iter()
        .map(|&m| -(two / big_n) * m * m - two * params.bias_h * m)
        .collect();
    let off_diagonal = m_grid[..n]
        .iter()
        .map(|&m| {
            let ladder = (jt * (jt + T::one()) - m * (m + T::one()))
                .max(T::zero())
                .sqrt();
            -params.gamma_ratio * ladder
        })
        .collect();
    Ok(TridiagonalHamiltonian {
        diagonal,
        off_diagonal,
        m_grid,
        j_phys: params.j_phys,
    })
}

impl<T: Real> TridiagonalHamiltonian<T> {
    pub fn dim(&self) -> usize {
        self.diagonal.len()
    }

    /// Checks the shape invariants of a hand-built Hamiltonian.
    pub fn validate(&self) -> Result<()> {
        let d = self.dim();
        if d < 2 || self.off_diagonal.len() + 1 != d || self.m_grid.len() != d {
            return Err(invalid(
                "hamiltonian",
                format!(
                    "inconsistent lengths: diagonal {}, off-diagonal {}, m-grid {}",
                    d,
                    self.off_diagonal.len(),
                    self.m_grid.len()
                ),
            ));
        }
        Ok(())
    }

    /// Dense symmetric matrix.
    pub fn to_dense(&self) -> Matrix<T> {
        let d = self.dim();
        let mut h = Matrix::from_diagonal(&self.diagonal);
        for i in 0..d - 1 {
            h[(i, i + 1)] = self.off_diagonal[i];
            h[(i + 1, i)] = self.off_diagonal[i];
        }
        h
    }

    /// Infinity norm (max absolute row sum).
    pub fn norm_inf(&self) -> T {
        let d = self.dim();
        (0..d)
            .map(|i| {
                let mut s = self.diagonal[i].abs();
                if i > 0 {
                    s += self.off_diagonal[i - 1].abs();
                }
                if i + 1 < d {
                    s += self.off_diagonal[i].abs();
                }
                s
            })
            .fold(T::zero(), T::max)
    }

    /// `H v` without forming the dense matrix.
    pub fn apply(&self, v: &[T]) -> Vec<T> {
        let d = self.dim();
        (0..d)
            .map(|i| {
                let mut s = self.diagonal[i] * v[i];
                if i > 0 {
                    s += self.off_diagonal[i - 1] * v[i - 1];
                }
                if i + 1 < d {
                    s += self.off_diagonal[i] * v[i + 1];
                }
                s
            })
            .collect()
    }
}
