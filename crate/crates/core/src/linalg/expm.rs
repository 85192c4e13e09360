//! Matrix exponential by scaling and squaring with diagonal Padé approximants
//! (Higham 2005, Algorithm 2.3).

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::linalg::CMatrix;
use crate::scalar::Real;

const THETA: [(usize, f64); 4] = [
    (3, 1.495_585_217_958_292e-2),
    (5, 2.539_398_330_063_23e-1),
    (7, 9.504_178_996_162_932e-1),
    (9, 2.097_847_961_257_068e0),
];
const THETA_13: f64 = 5.371_920_351_148_152;

const B3: [f64; 4] = [120.0, 60.0, 12.0, 1.0];
const B5: [f64; 6] = [30240.0, 15120.0, 3360.0, 420.0, 30.0, 1.0];
const B7: [f64; 8] = [
    17297280.0, 8648640.0, 1995840.0, 277200.0, 25200.0, 1512.0, 56.0, 1.0,
];
const B9: [f64; 10] = [
    17643225600.0,
    8821612800.0,
    2075673600.0,
    302702400.0,
    30270240.0,
    2162160.0,
    110880.0,
    3960.0,
    90.0,
    1.0,
];
const B13: [f64; 14] = [
    64764752532480000.0,
    32382376266240000.0,
    7771770303897600.0,
    1187353796428800.0,
    129060195264000.0,
    10559470521600.0,
    670442572800.0,
    33522128640.0,
    1323241920.0,
    40840800.0,
    960960.0,
    16380.0,
    182.0,
    1.0,
];

fn c<T: Real>(x: f64) -> Complex<T> {
    Complex::new(T::lit(x), T::zero())
}

/// `exp(a)` for a square complex matrix.
pub fn expm<T: Real>(a: &CMatrix<T>) -> Result<CMatrix<T>> {
    if !a.is_square() {
        return Err(Error::MatrixExponential(format!(
            "matrix is {}x{}, not square",
            a.rows(),
            a.cols()
        )));
    }
    if a.as_slice()
        .iter()
        .any(|z| !z.re.is_finite() || !z.im.is_finite())
    {
        return Err(Error::MatrixExponential("non-finite input".into()));
    }
    let n = a.rows();
    if n == 0 {
        return Ok(CMatrix::zeros(0, 0));
    }

    let norm = a.norm1().to_f64_lossy();
    for &(m, theta) in &THETA {
        if norm <= theta {
            let b: &[f64] = match m {
                3 => &B3,
                5 => &B5,
                7 => &B7,
                _ => &B9,
            };
            return pade_low(a, b);
        }
    }

    let s = if norm > THETA_13 {
        (norm / THETA_13).log2().ceil().max(0.0) as i32
    } else {
        0
    };
    let scaled = a.scale(c(0.5f64.powi(s)));
    let mut r = pade13(&scaled)?;
    for _ in 0..s {
        r = r.matmul(&r);
    }
    if r.as_slice()
        .iter()
        .any(|z| !z.re.is_finite() || !z.im.is_finite())
    {
        return Err(Error::MatrixExponential("overflow during squaring".into()));
    }
    Ok(r)
}

fn pade_low<T: Real>(a: &CMatrix<T>, b: &[f64]) -> Result<CMatrix<T>> {
    let n = a.rows();
    let ident = CMatrix::<T>::identity(n);
    let a2 = a.matmul(a);
    // Even powers A^0, A^2, A^4, ...
    let mut powers = vec![ident.clone(), a2.clone()];
    while 2 * powers.len() < b.len() {
        let next = powers.last().expect("non-empty").matmul(&a2);
        powers.push(next);
    }
    let mut u_inner = CMatrix::zeros(n, n);
    let mut v = CMatrix::zeros(n, n);
    for (k, p) in powers.iter().enumerate() {
        if 2 * k + 1 < b.len() {
            u_inner = &u_inner + &p.scale(c(b[2 * k + 1]));
        }
        v = &v + &p.scale(c(b[2 * k]));
    }
    let u = a.matmul(&u_inner);
    solve_pade(&u, &v)
}

fn pade13<T: Real>(a: &CMatrix<T>) -> Result<CMatrix<T>> {
    let n = a.rows();
    let b = |k: usize| c::<T>(B13[k]);
    let ident = CMatrix::<T>::identity(n);
    let a2 = a.matmul(a);
    let a4 = a2.matmul(&a2);
    let a6 = a4.matmul(&a2);

    let u_high = &(&a6.scale(b(13)) + &a4.scale(b(11))) + &a2.scale(b(9));
    let u_low = &(&(&a6.scale(b(7)) + &a4.scale(b(5))) + &a2.scale(b(3))) + &ident.scale(b(1));
    let u = a.matmul(&(&a6.matmul(&u_high) + &u_low));

    let v_high = &(&a6.scale(b(12)) + &a4.scale(b(10))) + &a2.scale(b(8));
    let v_low = &(&(&a6.scale(b(6)) + &a4.scale(b(4))) + &a2.scale(b(2))) + &ident.scale(b(0));
    let v = &a6.matmul(&v_high) + &v_low;
    solve_pade(&u, &v)
}

fn solve_pade<T: Real>(u: &CMatrix<T>, v: &CMatrix<T>) -> Result<CMatrix<T>> {
    let p = v + u;
    let q = v - u;
    q.solve(&p)
        .map_err(|_| Error::MatrixExponential("singular Padé denominator".into()))
}

#[cfg(test)]
mod tests {
    use super::*;

    type C = Complex<f64>;

    fn taylor(a: &CMatrix<f64>, terms: usize) -> CMatrix<f64> {
        let n = a.rows();
        let mut sum = CMatrix::identity(n);
        let mut term = CMatrix::identity(n);
        for k in 1..terms {
            term = term.matmul(a).scale(C::new(1.0 / k as f64, 0.0));
            sum = &sum + &term;
        }
        sum
    }

    fn max_diff(a: &CMatrix<f64>, b: &CMatrix<f64>) -> f64 {
        a.as_slice()
            .iter()
            .zip(b.as_slice())
            .map(|(x, y)| (x - y).norm())
            .fold(0.0, f64::max)
    }

    #[test]
    fn diagonal_matrix_every_pade_degree() {
        for &scale in &[1e-3, 0.1, 0.5, 1.5, 4.0, 40.0] {
            let d = [
                C::new(-scale, 0.3),
                C::new(0.5 * scale, -1.0),
                C::new(0.0, scale),
            ];
            let a = CMatrix::from_diagonal(&d);
            let e = expm(&a).unwrap();
            for (i, z) in d.iter().enumerate() {
                let rel = (e[(i, i)] - z.exp()).norm() / z.exp().norm();
                assert!(rel < 1e-12, "scale {scale}: rel err {rel}");
            }
        }
    }

    #[test]
    fn agrees_with_taylor_series_on_small_dense_matrix() {
        let a = CMatrix::from_fn(4, 4, |i, j| {
            C::new(0.3 * (i as f64 - j as f64), 0.1 * (i * j) as f64 - 0.2)
        });
        let e = expm(&a).unwrap();
        assert!(max_diff(&e, &taylor(&a, 40)) < 1e-13);
    }

    #[test]
    fn nilpotent_jordan_block() {
        let mut a = CMatrix::<f64>::zeros(3, 3);
        a[(0, 1)] = C::new(1.0, 0.0);
        a[(1, 2)] = C::new(1.0, 0.0);
        let e = expm(&a).unwrap();
        assert!((e[(0, 2)] - C::new(0.5, 0.0)).norm() < 1e-15);
        assert!((e[(0, 1)] - C::new(1.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn rotation_generator_large_norm() {
        // exp(theta * [[0, -1], [1, 0]]) is a rotation by theta.
        let theta = 37.0;
        let a = CMatrix::from_row_major(
            2,
            2,
            vec![
                C::new(0.0, 0.0),
                C::new(-theta, 0.0),
                C::new(theta, 0.0),
                C::new(0.0, 0.0),
            ],
        )
        .unwrap();
        let e = expm(&a).unwrap();
        assert!((e[(0, 0)].re - theta.cos()).abs() < 1e-12);
        assert!((e[(1, 0)].re - theta.sin()).abs() < 1e-12);
    }

    #[test]
    fn rejects_non_square_and_non_finite() {
        assert!(expm(&CMatrix::<f64>::zeros(2, 3)).is_err());
        let mut a = CMatrix::<f64>::zeros(2, 2);
        a[(0, 0)] = C::new(f64::NAN, 0.0);
        assert!(expm(&a).is_err());
    }
}
