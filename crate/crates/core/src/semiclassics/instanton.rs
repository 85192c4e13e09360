use serde::Serialize;

use crate::error::{invalid, Error, Result};
use crate::quad::integrate;
use crate::scalar::Real;
use crate::semiclassics::mean_field::order_parameter;

/// Agreement required between the closed form and the quadrature.
const CROSS_CHECK: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct InstantonAction<T> {
    /// `artanh(m*) - m*`.
    pub closed_form: T,
    /// Quadrature of `ln(sqrt(1 - z^2) / Gamma)` over `[0, m*]`.
    pub numeric: T,
}

/// WKB tunnelling action per spin, cross-checked against direct quadrature.
pub fn instanton_action<T: Real>(gamma_ratio: T) -> Result<InstantonAction<T>> {
    if !(gamma_ratio > T::zero() && gamma_ratio < T::one()) {
        return Err(invalid(
            "gamma_ratio",
            format!("need 0 < Gamma/J < 1, got {gamma_ratio}"),
        ));
    }
    let m = order_parameter(gamma_ratio).m_star;
    let closed_form = m.atanh() - m;
    let numeric = instanton_integral(gamma_ratio)?;
    let tol = T::lit(CROSS_CHECK).max(T::lit(1e3) * T::epsilon());
    if (closed_form - numeric).abs() > tol {
        return Err(Error::Quadrature {
            tol: tol.to_f64_lossy(),
            estimate: (closed_form - numeric).abs().to_f64_lossy(),
        });
    }
    Ok(InstantonAction {
        closed_form,
        numeric,
    })
}

/// `int_0^{m*} ln(sqrt(1 - z^2) / Gamma) dz`.
pub fn instanton_integral<T: Real>(gamma_ratio: T) -> Result<T> {
    let m = order_parameter(gamma_ratio).m_star;
    let g = gamma_ratio;
    integrate(
        |z: T| ((T::one() - z * z).sqrt() / g).ln(),
        T::zero(),
        m,
        T::lit(1e-13).max(T::epsilon()),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn table_values() {
        for (g, s) in [(0.99f64, 0.000947f64), (0.95, 0.010787), (0.90, 0.031255)] {
            let a = instanton_action(g).unwrap();
            assert!((a.closed_form - s).abs() < 1e-5, "{g}: {}", a.closed_form);
        }
    }

    #[test]
    fn outside_ordered_phase_rejected() {
        assert!(instanton_action(1.0f64).is_err());
        assert!(instanton_action(0.0f64).is_err());
    }
}
