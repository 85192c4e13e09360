use crate::error::{Error, Result};
use crate::lmg::spectrum::Spectrum;
use crate::scalar::Real;

/// Diagonal of the dichotomic magnetization sign `Q = sgn(Jz)` in the Dicke basis.
///
/// The `m = 0` state (even `N` only) is assigned `0`.
pub fn sign_observable<T: Real>(n_spins: usize) -> Vec<T> {
    let jt = T::of_usize(n_spins) / T::lit(2.0);
    (0..=n_spins)
        .map(|i| {
            let m = T::of_usize(i) - jt;
            if m > T::zero() {
                T::one()
            } else if m < T::zero() {
                -T::one()
            } else {
                T::zero()
            }
        })
        .collect()
}

/// `<E_i| O |E_j>` for an operator `O` diagonal in the Dicke basis.
pub fn eigenbasis_element<T: Real>(
    spec: &Spectrum<T>,
    diag_op: &[T],
    i: usize,
    j: usize,
) -> Result<T> {
    spec.check_index(i)?;
    spec.check_index(j)?;
    if diag_op.len() != spec.dim() {
        return Err(Error::DimensionMismatch {
            expected: spec.dim(),
            found: diag_op.len(),
        });
    }
    let v = &spec.eigenvectors;
    Ok((0..spec.dim())
        .map(|r| v[(r, i)] * diag_op[r] * v[(r, j)])
        .sum())
}

/// `<E_k| Jz^2 |E_k>`.
pub fn jz2_expectation<T: Real>(spec: &Spectrum<T>, level: usize) -> Result<T> {
    let jz2: Vec<T> = spec.m_grid.iter().map(|&m| m * m).collect();
    eigenbasis_element(spec, &jz2, level, level)
}

/// Ground-state weight on the `m = 0` Dicke state; zero for odd `N`.
pub fn m0_weight<T: Real>(spec: &Spectrum<T>) -> T {
    match spec.m_grid.iter().position(|&m| m == T::zero()) {
        Some(i) => {
            let a = spec.eigenvectors[(i, 0)];
            a * a
        }
        None => T::zero(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lmg::{build_hamiltonian, diagonalize};
    use crate::params::ModelParams;

    #[test]
    fn sign_observable_even_and_odd() {
        assert_eq!(sign_observable::<f64>(2), vec![-1.0, 0.0, 1.0]);
        assert_eq!(sign_observable::<f64>(3), vec![-1.0, -1.0, 1.0, 1.0]);
    }

    #[test]
    fn parity_selection_rule() {
        // Q is odd under the spin flip, so it only connects opposite-parity levels.
        let p = ModelParams::<f64>::new(20, 0.6).unwrap();
        let s = diagonalize(&build_hamiltonian(&p).unwrap()).unwrap();
        let q = sign_observable(20);
        for i in 0..6 {
            for j in 0..6 {
                let x = eigenbasis_element(&s, &q, i, j).unwrap();
                if (i + j) % 2 == 0 {
                    assert!(x.abs() < 1e-10, "Q[{i}{j}] = {x}");
                }
            }
        }
        assert!(eigenbasis_element(&s, &q, 0, 1).unwrap().abs() > 0.5);
    }

    #[test]
    fn odd_n_has_no_m0_weight() {
        let p = ModelParams::<f64>::new(7, 0.6).unwrap();
        let s = diagonalize(&build_hamiltonian(&p).unwrap()).unwrap();
        assert_eq!(m0_weight(&s), 0.0);
    }

    #[test]
    fn mismatched_operator_rejected() {
        let p = ModelParams::<f64>::new(4, 0.6).unwrap();
        let s = diagonalize(&build_hamiltonian(&p).unwrap()).unwrap();
        assert!(eigenbasis_element(&s, &[1.0; 3], 0, 1).is_err());
        assert!(eigenbasis_element(&s, &sign_observable(4), 0, 9).is_err());
    }
}
