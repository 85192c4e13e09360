//! Implicit-shift QL iteration for real symmetric tridiagonal matrices.

use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::scalar::Real;

const MAX_SWEEPS: usize = 60;

/// Eigen-decomposition of a symmetric tridiagonal matrix.
///
/// Eigenvalues are sorted ascending; column `k` of `vectors` is the
/// normalized eigenvector for `values[k]`.
#[derive(Debug, Clone)]
pub struct TridiagonalEigen<T> {
    pub values: Vec<T>,
    pub vectors: Matrix<T>,
}

/// Diagonalizes the symmetric tridiagonal matrix with main diagonal `diag`
/// and first off-diagonal `off` (`off[i]` couples rows `i` and `i + 1`).
pub fn tridiagonal_eigen<T: Real>(diag: &[T], off: &[T]) -> Result<TridiagonalEigen<T>> {
    let n = diag.len();
    if n == 0 {
        return Ok(TridiagonalEigen {
            values: Vec::new(),
            vectors: Matrix::zeros(0, 0),
        });
    }
    if off.len() + 1 != n {
        return Err(Error::DimensionMismatch {
            expected: n - 1,
            found: off.len(),
        });
    }
    if diag.iter().chain(off).any(|x| !x.is_finite()) {
        return Err(Error::NonFinite("tridiagonal input"));
    }

    let mut d = diag.to_vec();
    let mut e = off.to_vec();
    e.push(T::zero());
    let mut z = Matrix::<T>::identity(n);
    let eps = T::epsilon();
    let two = T::lit(2.0);

    for l in 0..n {
        let mut sweeps = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= eps * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            sweeps += 1;
            if sweeps > MAX_SWEEPS {
                return Err(Error::EigenNoConvergence {
                    index: l,
                    iterations: sweeps,
                });
            }

            let mut g = (d[l + 1] - d[l]) / (two * e[l]);
            let mut r = g.hypot(T::one());
            g = d[m] - d[l] + e[l] / (g + r.copysign(g));
            let (mut s, mut c, mut p) = (T::one(), T::one(), T::zero());
            let mut deflated = false;
            let mut i = m;
            while i > l {
                i -= 1;
                let f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == T::zero() {
                    d[i + 1] -= p;
                    e[m] = T::zero();
                    deflated = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + two * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
                for k in 0..n {
                    let zk1 = z[(k, i + 1)];
                    let zk = z[(k, i)];
                    z[(k, i + 1)] = s * zk + c * zk1;
                    z[(k, i)] = c * zk - s * zk1;
                }
            }
            if deflated {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = T::zero();
        }
    }

    if d.iter().any(|x| !x.is_finite()) {
        return Err(Error::NonFinite("tridiagonal QL iteration"));
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| d[a].partial_cmp(&d[b]).expect("finite eigenvalues"));
    let values = order.iter().map(|&k| d[k]).collect();
    let vectors = Matrix::from_fn(n, n, |row, col| z[(row, order[col])]);
    Ok(TridiagonalEigen { values, vectors })
}
