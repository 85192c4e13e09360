use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::params::ModelParams;
use crate::scalar::Real;
use crate::semiclassics::free_energy::{barrier, free_energy_curvature};
use crate::semiclassics::mean_field::order_parameter;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum KramersMode {
    /// Overdamped Kramers prefactor `2 pi / (Gamma_eff sqrt(f''(m_min) |f''(0)|))`.
    Full,
    /// Precession period `2 pi / (2 J m*)` as the attempt time.
    AttemptPeriod,
}

/// Thermal escape time over the mean-field barrier.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct KramersTime<T> {
    /// `prefactor_s * exp(exponent)`.
    pub seconds: T,
    pub prefactor_s: T,
    /// `N delta_f0 / k_B T`.
    pub exponent: T,
}

/// Kramers escape time in seconds. `gamma_eff` is the dimensionless mobility
/// (time measured in `1/J`) and is ignored in attempt-period mode.
pub fn kramers_time<T: Real>(
    params: &ModelParams<T>,
    gamma_eff: T,
    mode: KramersMode,
) -> Result<KramersTime<T>> {
    let b = barrier(params)?;
    let prefactor = match mode {
        KramersMode::Full => {
            if !gamma_eff.is_finite() || gamma_eff <= T::zero() {
                return Err(invalid(
                    "gamma_eff",
                    format!("must be finite and > 0, got {gamma_eff}"),
                ));
            }
            let mut p = *params;
            p.bias_h = T::zero();
            let k_min = free_energy_curvature(b.m_min, &p);
            let k_top = free_energy_curvature(T::zero(), &p);
            if !(k_min > T::zero()) || !(k_top < T::zero()) {
                return Err(Error::DisorderedPhase(params.gamma_ratio.to_f64_lossy()));
            }
            T::TAU() / (gamma_eff * (k_min * k_top.abs()).sqrt()) / params.j_phys
        }
        KramersMode::AttemptPeriod => {
            let m = order_parameter(params.gamma_ratio).m_star;
            T::TAU() / (T::lit(2.0) * m * params.j_phys)
        }
    };
    Ok(KramersTime {
        seconds: prefactor * b.exponent.exp(),
        prefactor_s: prefactor,
        exponent: b.exponent,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prefactor_is_independent_of_n() {
        let p = ModelParams::<f64>::benchmark();
        let a = kramers_time(&p, 1.0, KramersMode::Full).unwrap();
        let b = kramers_time(&p.with_n_spins(740).unwrap(), 1.0, KramersMode::Full).unwrap();
        assert!((a.prefactor_s / b.prefactor_s - 1.0).abs() < 1e-6);
        assert!((b.exponent / a.exponent - 2.0).abs() < 1e-12);
    }

    #[test]
    fn mobility_must_be_positive() {
        let p = ModelParams::<f64>::benchmark();
        assert!(kramers_time(&p, 0.0, KramersMode::Full).is_err());
        assert!(kramers_time(&p, 0.0, KramersMode::AttemptPeriod).is_ok());
    }
}
