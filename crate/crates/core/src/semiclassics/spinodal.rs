use serde::Serialize;

use crate::error::{invalid, Error, Result};
use crate::lmg::{build_hamiltonian, diagonalize};
use crate::params::ModelParams;
use crate::scalar::Real;
use crate::semiclassics::mean_field::order_parameter;

/// Zero-temperature spinodal of the metastable well.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Spinodal<T> {
    /// Field at which the metastable minimum disappears, in units of `J`.
    pub h_sp: T,
    /// `sqrt(E_sp^2 - Gamma^2)`.
    pub y_sp: T,
    /// Magnetization at the spinodal, on the metastable side.
    pub m_sp: T,
    /// `(J Gamma^2)^(1/3)`.
    pub e_sp: T,
}

pub fn spinodal_field<T: Real>(gamma_ratio: T) -> Result<Spinodal<T>> {
    if !(gamma_ratio > T::zero() && gamma_ratio < T::one()) {
        return Err(Error::DisorderedPhase(gamma_ratio.to_f64_lossy()));
    }
    let g = gamma_ratio;
    let e_sp = (g * g).cbrt();
    let y_sp = (e_sp * e_sp - g * g).sqrt();
    Ok(Spinodal {
        h_sp: y_sp * (T::one() / (g * g).cbrt() - T::one()),
        y_sp,
        m_sp: -y_sp / e_sp,
        e_sp,
    })
}

/// Controllable sweep range `[Delta E/(N m*), h_sp]` in rad/s.
pub fn sweep_window<T: Real>(params: &ModelParams<T>) -> Result<(T, T)> {
    let spec = diagonalize(&build_hamiltonian(params)?)?;
    sweep_window_with_gap(params, spec.delta_e_rad_s())
}

/// As [`sweep_window`] with a precomputed gap in rad/s.
pub fn sweep_window_with_gap<T: Real>(params: &ModelParams<T>, delta_e_rad_s: T) -> Result<(T, T)> {
    let sp = spinodal_field(params.gamma_ratio)?;
    let m = order_parameter(params.gamma_ratio).m_star;
    Ok((delta_e_rad_s / (params.n() * m), sp.h_sp * params.j_phys))
}

/// Landau-Zener diabatic probability `exp(-pi Delta E^2 tau_Q / (4 alpha))`
/// with `alpha = N m* Delta h`. Energies in rad/s, `tau_q` in s.
pub fn lz_error<T: Real>(
    delta_e_rad_s: T,
    n_spins: usize,
    m_star: T,
    delta_h_rad_s: T,
    tau_q_s: T,
) -> Result<T> {
    if !(tau_q_s >= T::zero()) || !tau_q_s.is_finite() {
        return Err(invalid(
            "tau_q",
            format!("must be finite and >= 0, got {tau_q_s}"),
        ));
    }
    let alpha = T::of_usize(n_spins) * m_star * delta_h_rad_s;
    if !(alpha > T::zero()) || !alpha.is_finite() {
        return Err(invalid("delta_h", "N m* delta_h must be finite and > 0"));
    }
    Ok((-T::PI() * delta_e_rad_s * delta_e_rad_s * tau_q_s / (T::lit(4.0) * alpha)).exp())
}

/// Schematic interpolation between the coherent Zener regime and the
/// thermally randomized regime as a function of `x = tau_Q Delta E^2 / (4 alpha)`.
/// For plotting only.
pub fn lz_crossover_schematic<T: Real>(x: T) -> T {
    let w = (-x * x).exp();
    (-T::PI() * x).exp() * w + (T::one() - w)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn benchmark_spinodal() {
        let s = spinodal_field(0.95f64).unwrap();
        assert!((s.h_sp / 0.0062 - 1.0).abs() < 0.01);
        assert!((s.y_sp / 0.177 - 1.0).abs() < 0.01);
        assert!((s.m_sp / -0.183 - 1.0).abs() < 0.01);
    }

    #[test]
    fn zener_limits() {
        assert_eq!(lz_error(1310.0, 370, 0.3, 50.0, 0.0).unwrap(), 1.0);
        // x = 1 gives exp(-pi)
        let alpha = 370.0 * 0.3 * 50.0;
        let tau = 4.0 * alpha / (1310.0f64 * 1310.0);
        let p = lz_error(1310.0, 370, 0.3, 50.0, tau).unwrap();
        assert!((p - (-std::f64::consts::PI).exp()).abs() < 1e-14);
        let p2 = lz_error(1310.0, 370, 0.3, 50.0, 2.0 * tau).unwrap();
        assert!((p2 - p * p).abs() < 1e-14);
        assert!(lz_error(1310.0, 370, 0.3, 0.0, tau).is_err());
    }

    #[test]
    fn schematic_limits() {
        assert_eq!(lz_crossover_schematic(0.0f64), 1.0);
        assert!((lz_crossover_schematic(10.0f64) - 1.0).abs() < 1e-12);
    }
}
