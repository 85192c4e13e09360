use num_complex::Complex;
use serde::Serialize;

use crate::error::{invalid, Error, Result};
use crate::linalg::{expm, CMatrix, Matrix};
use crate::open_system::density::DensityOperator;
use crate::open_system::level_system::LevelSystem;
use crate::scalar::Real;

/// Drift above which a propagated Hermitian operator is symmetrized.
const HERMITICITY_SYMMETRIZE: f64 = 1e-12;
/// Drift above which symmetrization is reported.
const HERMITICITY_WARN: f64 = 1e-8;
/// Inputs closer than this to Hermitian are treated as Hermitian.
const HERMITIAN_INPUT: f64 = 1e-10;

/// GKSL generator acting on column-stacked `n x n` operators.
#[derive(Debug, Clone, Serialize)]
pub struct Superoperator<T> {
    n: usize,
    matrix: CMatrix<T>,
}

/// `exp(L t)` for a fixed `t`, reusable across many inputs.
#[derive(Debug, Clone)]
pub struct Propagator<T> {
    n: usize,
    t: T,
    matrix: CMatrix<T>,
}

/// Builds `L = -i (I ⊗ H - H^T ⊗ I) + gamma (Jz^T ⊗ Jz - 1/2 I ⊗ Jz2 - 1/2 Jz2^T ⊗ I)`.
///
/// `gamma` is dimensionless (already divided by `j_phys`).
pub fn build_superoperator<T: Real>(sys: &LevelSystem<T>, gamma: T) -> Result<Superoperator<T>> {
    if !gamma.is_finite() || gamma < T::zero() {
        return Err(invalid(
            "gamma",
            format!("must be finite and >= 0, got {gamma}"),
        ));
    }
    Ok(Superoperator::from_parts(
        &sys.hamiltonian(),
        &sys.jz,
        &sys.jz2,
        gamma,
    ))
}

impl<T: Real> Superoperator<T> {
    /// Generator for an arbitrary real symmetric `h`, jump operator `jz` and
    /// anticommutator operator `jz2`.
    pub fn from_parts(h: &Matrix<T>, jz: &Matrix<T>, jz2: &Matrix<T>, gamma: T) -> Self {
        let n = h.rows();
        let id = Matrix::<T>::identity(n);
        let coherent = &id.kron(h) - &h.transpose().kron(&id);
        let half = T::lit(0.5);
        let jump = jz.transpose().kron(jz);
        let anti = &id.kron(jz2) + &jz2.transpose().kron(&id);
        let dissipator = (&jump - &anti.scale(half)).scale(gamma);
        let matrix = Matrix::from_fn(n * n, n * n, |i, j| {
            Complex::new(dissipator[(i, j)], -coherent[(i, j)])
        });
        Self { n, matrix }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn matrix(&self) -> &CMatrix<T> {
        &self.matrix
    }

    /// `exp(L t)`.
    pub fn propagator(&self, t: T) -> Result<Propagator<T>> {
        if !t.is_finite() || t < T::zero() {
            return Err(invalid("t", format!("must be finite and >= 0, got {t}")));
        }
        let c = Complex::new(t, T::zero());
        let matrix = expm(&self.matrix.scale(c))?;
        Ok(Propagator {
            n: self.n,
            t,
            matrix,
        })
    }

    /// `L vec(x)` reshaped back to a matrix.
    pub fn apply(&self, x: &CMatrix<T>) -> Result<CMatrix<T>> {
        apply_vec(&self.matrix, self.n, x)
    }
}

impl<T: Real> Propagator<T> {
    pub fn time(&self) -> T {
        self.t
    }

    pub fn matrix(&self) -> &CMatrix<T> {
        &self.matrix
    }

    /// Propagates an operator. Hermitian inputs have any numerical
    /// Hermiticity drift removed from the output.
    pub fn apply(&self, x: &CMatrix<T>) -> Result<CMatrix<T>> {
        let out = apply_vec(&self.matrix, self.n, x)?;
        if x.hermiticity_defect() > T::lit(HERMITIAN_INPUT) {
            return Ok(out);
        }
        let drift = out.hermiticity_defect();
        if drift <= T::lit(HERMITICITY_SYMMETRIZE) {
            return Ok(out);
        }
        if drift > T::lit(HERMITICITY_WARN) {
            log::warn!(
                "Hermiticity drift {:e} after propagation by t = {}; symmetrizing",
                drift.to_f64_lossy(),
                self.t
            );
        }
        Ok(out.hermitian_part())
    }

    /// Applies the propagator `k` times.
    pub fn apply_n(&self, x: &CMatrix<T>, k: usize) -> Result<CMatrix<T>> {
        let mut y = x.clone();
        for _ in 0..k {
            y = self.apply(&y)?;
        }
        Ok(y)
    }
}

fn apply_vec<T: Real>(m: &CMatrix<T>, n: usize, x: &CMatrix<T>) -> Result<CMatrix<T>> {
    if x.rows() != n || x.cols() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: x.rows(),
        });
    }
    let v = m.matvec(&x.vec_columns());
    if v.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(Error::NonFinite("superoperator application"));
    }
    CMatrix::unvec_columns(&v, n)
}

/// Propagates a state by `exp(L t)`.
pub fn propagate<T: Real>(
    l: &Superoperator<T>,
    rho: &DensityOperator<T>,
    t: T,
) -> Result<DensityOperator<T>> {
    let p = l.propagator(t)?;
    Ok(DensityOperator::from_trusted(p.apply(rho.matrix())?))
}

#[cfg(test)]
mod tests {
    use super::*;

    type C = Complex<f64>;

    fn three_level() -> Superoperator<f64> {
        let h = Matrix::zeros(3, 3);
        let jz = Matrix::from_diagonal(&[-1.0, 0.0, 1.0]);
        let jz2 = jz.matmul(&jz);
        Superoperator::from_parts(&h, &jz, &jz2, 0.1)
    }

    #[test]
    fn analytic_dephasing_decay() {
        let l = three_level();
        let mut m = CMatrix::from_diagonal(&[C::new(0.5, 0.0), C::new(0.0, 0.0), C::new(0.5, 0.0)]);
        m[(0, 2)] = C::new(0.5, 0.0);
        m[(2, 0)] = C::new(0.5, 0.0);
        let rho = DensityOperator::new(m).unwrap();
        let out = propagate(&l, &rho, 2.0).unwrap();
        let expected = 0.5 * (-0.4f64).exp();
        assert!(((out.matrix()[(0, 2)].re - expected) / expected).abs() < 1e-9);
        assert!((out.trace().re - 1.0).abs() < 1e-12);
    }

    #[test]
    fn zero_time_is_identity() {
        let l = three_level();
        let p = l.propagator(0.0).unwrap();
        let id = CMatrix::<f64>::identity(9);
        let d = (&p.matrix - &id).norm1();
        assert!(d < 1e-12);
    }

    #[test]
    fn coherent_part_sign() {
        // d rho_01/dt = -i (E0 - E1) rho_01 for H = diag(E0, E1).
        let h = Matrix::from_diagonal(&[0.0, 1.0]);
        let z = Matrix::zeros(2, 2);
        let l = Superoperator::from_parts(&h, &z, &z, 0.0);
        let mut x = CMatrix::zeros(2, 2);
        x[(0, 1)] = C::new(1.0, 0.0);
        let y = l.apply(&x).unwrap();
        assert!((y[(0, 1)] - C::new(0.0, 1.0)).norm() < 1e-15);
    }

    #[test]
    fn rejects_negative_time_and_rate() {
        let l = three_level();
        assert!(l.propagator(-1.0).is_err());
        let h = Matrix::from_diagonal(&[0.0, 1.0]);
        let sys = LevelSystem {
            n_levels: 2,
            h_diag: vec![0.0, 1.0],
            jz: h.clone(),
            q: h.clone(),
            jz2: h,
            delta_e: 1.0,
            j_phys: 1.0,
        };
        assert!(build_superoperator(&sys, -0.1).is_err());
    }
}
