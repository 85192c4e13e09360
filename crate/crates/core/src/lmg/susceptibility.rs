use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lmg::{build_hamiltonian, diagonalize, Spectrum};
use crate::params::ModelParams;
use crate::scalar::Real;

/// Default finite-difference step in the longitudinal field, in units of `J`.
pub const DEFAULT_SUSCEPTIBILITY_STEP: f64 = 1e-6;

/// Relative change between `step` and `step / 2` above which the estimate is rejected.
const LINEARITY_TOLERANCE: f64 = 0.01;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SusceptibilityMode {
    /// Central difference of the exact ground-state magnetization.
    Exact,
    /// Ground-doublet estimate `2 N m*^2 / Delta E`.
    TwoLevel,
}

/// Intensive zero-temperature susceptibility `d m_z / d h` in units of `1/J`.
///
/// `step_h` is only used in [`SusceptibilityMode::Exact`].
pub fn susceptibility<T: Real>(
    params: &ModelParams<T>,
    mode: SusceptibilityMode,
    step_h: T,
) -> Result<T> {
    let params = params.validated()?;
    match mode {
        SusceptibilityMode::TwoLevel => {
            let spec = diagonalize(&build_hamiltonian(&params)?)?;
            let m_star_sq = (T::one() - params.gamma_ratio * params.gamma_ratio).max(T::zero());
            Ok(T::lit(2.0) * params.n() * m_star_sq / spec.delta_e())
        }
        SusceptibilityMode::Exact => {
            if !step_h.is_finite() || step_h <= T::zero() {
                return Err(crate::error::invalid(
                    "step_h",
                    format!("must be finite and > 0, got {step_h}"),
                ));
            }
            let coarse = central_difference(&params, step_h)?;
            let fine = central_difference(&params, step_h / T::lit(2.0))?;
            let rel = ((coarse - fine) / fine).abs();
            if !rel.is_finite() || rel > T::lit(LINEARITY_TOLERANCE) {
                return Err(Error::Nonlinear {
                    step: step_h.to_f64_lossy(),
                    coarse: coarse.to_f64_lossy(),
                    fine: fine.to_f64_lossy(),
                });
            }
            Ok(coarse)
        }
    }
}

fn ground_magnetization<T: Real>(params: &ModelParams<T>, h: T) -> Result<T> {
    let spec: Spectrum<T> = diagonalize(&build_hamiltonian(&params.with_bias(h)?)?)?;
    let jz = spec
        .m_grid
        .iter()
        .enumerate()
        .map(|(i, &m)| {
            let a = spec.eigenvectors[(i, 0)];
            a * a * m
        })
        .sum::<T>();
    Ok(T::lit(2.0) * jz / params.n())
}

fn central_difference<T: Real>(params: &ModelParams<T>, step: T) -> Result<T> {
    let h0 = params.bias_h;
    let up = ground_magnetization(params, h0 + step)?;
    let down = ground_magnetization(params, h0 - step)?;
    let chi = (up - down) / (T::lit(2.0) * step);
    if !chi.is_finite() {
        return Err(Error::NonFinite("susceptibility"));
    }
    Ok(chi)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn large_step_is_flagged_nonlinear() {
        let p = ModelParams::<f64>::benchmark();
        let r = susceptibility(&p, SusceptibilityMode::Exact, 1e-2);
        assert!(matches!(r, Err(Error::Nonlinear { .. })), "{r:?}");
    }

    #[test]
    fn rejects_bad_step() {
        let p = ModelParams::<f64>::new(10, 0.5).unwrap();
        assert!(susceptibility(&p, SusceptibilityMode::Exact, 0.0).is_err());
        assert!(susceptibility(&p, SusceptibilityMode::Exact, f64::NAN).is_err());
    }

    #[test]
    fn small_system_exact_is_below_two_level() {
        let p = ModelParams::<f64>::new(40, 0.8).unwrap();
        let exact = susceptibility(&p, SusceptibilityMode::Exact, 1e-7).unwrap();
        let two = susceptibility(&p, SusceptibilityMode::TwoLevel, 0.0).unwrap();
        assert!(exact > 0.0 && exact < two, "{exact} {two}");
    }
}
