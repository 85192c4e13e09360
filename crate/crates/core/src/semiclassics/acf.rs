use num_complex::Complex;
use serde::Serialize;

use crate::error::{invalid, Error, Result};
use crate::scalar::Real;
use crate::semiclassics::mean_field::order_parameter;

const MAX_ITER: usize = 500;

/// Normal modes of the Bloch equations linearized about the ordered fixed point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AcfModes<T> {
    /// Sorted by descending imaginary part: `-Gamma2 + i w0`, `-Gamma1`, `-Gamma2 - i w0`.
    pub eigenvalues: [Complex<T>; 3],
    /// `2 J m*`.
    pub omega0: T,
    /// The linearized generator, row-major.
    pub matrix: [[T; 3]; 3],
}

/// Eigenvalues of the linearized generator
/// `[[-G2, 2 J m*, 0], [-2 J m*, -G2, 0], [0, -2 Gamma, -G1]]`.
pub fn acf_linearization<T: Real>(j: T, gamma: T, gamma1: T, gamma2: T) -> Result<AcfModes<T>> {
    if !(j > T::zero()) || !(gamma >= T::zero()) || !(gamma1 >= T::zero()) || !(gamma2 >= T::zero())
    {
        return Err(invalid(
            "acf",
            "need J > 0 and non-negative Gamma, Gamma1, Gamma2",
        ));
    }
    let op = order_parameter(gamma / j);
    if !op.ordered {
        return Err(Error::DisorderedPhase((gamma / j).to_f64_lossy()));
    }
    let w = T::lit(2.0) * j * op.m_star;
    let z = T::zero();
    let a = [
        [-gamma2, w, z],
        [-w, -gamma2, z],
        [z, -T::lit(2.0) * gamma, -gamma1],
    ];
    let mut eigenvalues = eigenvalues_3x3(&a)?;
    eigenvalues.sort_by(|x, y| y.im.partial_cmp(&x.im).unwrap_or(std::cmp::Ordering::Equal));
    Ok(AcfModes {
        eigenvalues,
        omega0: w,
        matrix: a,
    })
}

/// Roots of the characteristic polynomial by simultaneous (Durand-Kerner) iteration.
fn eigenvalues_3x3<T: Real>(a: &[[T; 3]; 3]) -> Result<[Complex<T>; 3]> {
    let tr = a[0][0] + a[1][1] + a[2][2];
    let minors = a[0][0] * a[1][1] - a[0][1] * a[1][0] + a[0][0] * a[2][2] - a[0][2] * a[2][0]
        + a[1][1] * a[2][2]
        - a[1][2] * a[2][1];
    let det = a[0][0] * (a[1][1] * a[2][2] - a[1][2] * a[2][1])
        - a[0][1] * (a[1][0] * a[2][2] - a[1][2] * a[2][0])
        + a[0][2] * (a[1][0] * a[2][1] - a[1][1] * a[2][0]);
    // lambda^3 + c2 lambda^2 + c1 lambda + c0
    let (c2, c1, c0) = (-tr, minors, -det);
    let poly = |x: Complex<T>| ((x + c2) * x + c1) * x + c0;
    let radius = T::one() + c2.abs().max(c1.abs()).max(c0.abs());
    let seed = Complex::new(T::lit(0.4), T::lit(0.9));
    let mut roots = [
        seed * radius,
        seed * seed * radius,
        seed * seed * seed * radius,
    ];
    let tol = T::epsilon() * T::lit(16.0) * radius;
    for _ in 0..MAX_ITER {
        let mut delta = T::zero();
        for i in 0..3 {
            let mut denom = Complex::new(T::one(), T::zero());
            for j in 0..3 {
                if i != j {
                    denom = denom * (roots[i] - roots[j]);
                }
            }
            let step = poly(roots[i]) / denom;
            roots[i] = roots[i] - step;
            delta = delta.max(step.norm());
        }
        if !delta.is_finite() {
            return Err(Error::NonFinite("characteristic polynomial roots"));
        }
        if delta <= tol {
            return Ok(roots);
        }
    }
    Err(Error::EigenNoConvergence {
        index: 0,
        iterations: MAX_ITER,
    })
}
