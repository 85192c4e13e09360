use num_complex::Complex;
use serde::Serialize;

use crate::error::{invalid, Error, Result};
use crate::linalg::{CMatrix, Matrix};
use crate::scalar::Real;

const STATE_TOLERANCE: f64 = 1e-10;

/// Hermitian, unit-trace density operator.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DensityOperator<T> {
    matrix: CMatrix<T>,
}

impl<T: Real> DensityOperator<T> {
    /// Wraps `matrix` after checking Hermiticity and unit trace.
    pub fn new(matrix: CMatrix<T>) -> Result<Self> {
        if !matrix.is_square() {
            return Err(Error::DimensionMismatch {
                expected: matrix.rows(),
                found: matrix.cols(),
            });
        }
        if matrix
            .as_slice()
            .iter()
            .any(|z| !z.re.is_finite() || !z.im.is_finite())
        {
            return Err(Error::NonFinite("density operator"));
        }
        let tol = T::lit(STATE_TOLERANCE);
        let herm = matrix.hermiticity_defect();
        if herm > tol {
            return Err(invalid("rho", format!("not Hermitian (defect {herm})")));
        }
        let tr = matrix.trace();
        if (tr - Complex::new(T::one(), T::zero())).norm() > tol {
            return Err(invalid("rho", format!("trace {tr} differs from 1")));
        }
        Ok(Self { matrix })
    }

    /// `|E_k><E_k|` in dimension `n`.
    pub fn pure(n: usize, k: usize) -> Result<Self> {
        if k >= n {
            return Err(Error::IndexOutOfRange { index: k, dim: n });
        }
        let mut m = CMatrix::zeros(n, n);
        m[(k, k)] = Complex::new(T::one(), T::zero());
        Ok(Self { matrix: m })
    }

    /// Diagonal mixture with the given populations.
    pub fn diagonal(populations: &[T]) -> Result<Self> {
        if populations.iter().any(|&p| p < T::zero()) {
            return Err(invalid("populations", "must be non-negative"));
        }
        let d: Vec<_> = populations
            .iter()
            .map(|&p| Complex::new(p, T::zero()))
            .collect();
        Self::new(CMatrix::from_diagonal(&d))
    }

    /// Ground-doublet mixture `p |E0><E0| + (1 - p) |E1><E1|` in dimension `n`.
    pub fn doublet_mixture(n: usize, p: T) -> Result<Self> {
        if n < 2 || !(T::zero()..=T::one()).contains(&p) {
            return Err(invalid(
                "p",
                format!("need n >= 2 and 0 <= p <= 1, got n = {n}, p = {p}"),
            ));
        }
        let mut pops = vec![T::zero(); n];
        pops[0] = p;
        pops[1] = T::one() - p;
        Self::diagonal(&pops)
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn matrix(&self) -> &CMatrix<T> {
        &self.matrix
    }

    pub fn into_matrix(self) -> CMatrix<T> {
        self.matrix
    }

    pub fn trace(&self) -> Complex<T> {
        self.matrix.trace()
    }

    /// `Tr rho^2`.
    pub fn purity(&self) -> T {
        self.matrix.as_slice().iter().map(|z| z.norm_sqr()).sum()
    }

    /// Expectation value `Tr[O rho]` of a real observable.
    pub fn expectation(&self, op: &Matrix<T>) -> Result<T> {
        if op.rows() != self.dim() || op.cols() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: op.rows(),
            });
        }
        Ok(op.to_complex().trace_product(&self.matrix).re)
    }

    pub(crate) fn from_trusted(matrix: CMatrix<T>) -> Self {
        Self { matrix }
    }
}

/// Lüders instrument `1/2 (Q rho + rho Q)` of a dichotomic observable.
///
/// The result is an operator, not a state: it is neither trace-normalized nor
/// positive in general.
pub fn lueders_instrument<T: Real>(q: &Matrix<T>, rho: &CMatrix<T>) -> Result<CMatrix<T>> {
    if q.rows() != rho.rows() || q.cols() != rho.cols() || !q.is_square() {
        return Err(Error::DimensionMismatch {
            expected: rho.rows(),
            found: q.rows(),
        });
    }
    let qc = q.to_complex();
    let half = Complex::new(T::lit(0.5), T::zero());
    Ok((&qc.matmul(rho) + &rho.matmul(&qc)).scale(half))
}
