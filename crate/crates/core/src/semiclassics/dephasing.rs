use serde::Serialize;

use crate::error::{invalid, Result};
use crate::lmg::{eigenbasis_element, jz2_expectation, sign_observable, Spectrum};
use crate::open_system::{t2_phys, threshold_gamma, truncate};
use crate::params::ModelParams;
use crate::scalar::Real;
use crate::semiclassics::mean_field::order_parameter;

/// Truncation used for the fully numerical level of the hierarchy.
pub const HIERARCHY_LEVELS: usize = 5;

/// Coherence times under collective and independent per-spin dephasing.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DephasingRates<T> {
    /// `1/T2 = m*^2 N^2 gamma / 2`.
    pub t2_coll_ms: T,
    /// `1/T2 = N gamma (1 + m*^2)`.
    pub t2_local_ms: T,
}

pub fn dephasing_rates<T: Real>(
    params: &ModelParams<T>,
    gamma_phi_per_s: T,
) -> Result<DephasingRates<T>> {
    if !(gamma_phi_per_s > T::zero()) || !gamma_phi_per_s.is_finite() {
        return Err(invalid(
            "gamma_phi",
            format!("must be finite and > 0, got {gamma_phi_per_s}"),
        ));
    }
    let m2 = order_parameter(params.gamma_ratio).m_star.powi(2);
    let n = params.n();
    let ms = T::lit(1000.0);
    Ok(DephasingRates {
        t2_coll_ms: ms / (m2 * n * n * gamma_phi_per_s / T::lit(2.0)),
        t2_local_ms: ms / (n * gamma_phi_per_s * (T::one() + m2)),
    })
}

/// Ground-doublet `K3 = Q01^2 (e^{-x} + e^{-2x}/2)` at the optimal spacing
/// `dt = pi/(3 Delta E)`, with `x = dt / T2`.
pub fn k3_two_level<T: Real>(t2_ms: T, delta_e_rad_s: T, q01_sq: T) -> Result<T> {
    if !(t2_ms > T::zero()) {
        return Err(invalid("t2", format!("must be > 0, got {t2_ms}")));
    }
    let dt_ms = T::lit(1000.0) * T::PI() / (T::lit(3.0) * delta_e_rad_s);
    let x = dt_ms / t2_ms;
    Ok(q01_sq * ((-x).exp() + (-(x + x)).exp() / T::lit(2.0)))
}

/// Slope `c` in the two-level curve `K3(gamma) = Q01^2 (e^{-c gamma} + e^{-2 c gamma}/2)`,
/// `c = pi Gamma01 / (3 Delta E)` with `Gamma01 / gamma` the mean of the
/// ground-doublet `<Jz^2>`. The gap is taken in rad/s.
pub fn two_level_decay_coefficient<T: Real>(spec: &Spectrum<T>, delta_e_rad_s: T) -> Result<T> {
    let mean = (jz2_expectation(spec, 0)? + jz2_expectation(spec, 1)?) / T::lit(2.0);
    Ok(T::PI() * mean / (T::lit(3.0) * delta_e_rad_s))
}

/// Dephasing thresholds at increasing levels of description.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HierarchyReport<T> {
    /// Mean-field two-level threshold, collective rate `m*^2 N^2 gamma / 2`.
    pub gamma_a: T,
    /// Two-level threshold with exact doublet `<Jz^2>`.
    pub gamma_b: T,
    /// Multi-level GKSL threshold.
    pub gamma_c: T,
    /// Root of `Q01^2 (xi + xi^2/2) = 1`, `xi = exp(-dt/T2)`.
    pub xi_root: T,
    /// Coherence time at which the two-level `K3` reaches 1.
    pub t2_threshold_ms: T,
    pub reference_gamma: T,
    pub t2_coll_ms: T,
    pub t2_local_ms: T,
    pub t2_phys_ms: T,
    pub ratio_ab: T,
    pub ratio_bc: T,
}

/// Threshold hierarchy; `gamma_c` is computed on a [`HIERARCHY_LEVELS`]-level truncation.
pub fn hierarchy<T: Real>(
    params: &ModelParams<T>,
    spec: &Spectrum<T>,
    reference_gamma: T,
) -> Result<HierarchyReport<T>> {
    let sys = truncate(
        spec,
        &sign_observable(params.n_spins),
        HIERARCHY_LEVELS.min(spec.dim()),
    )?;
    let gamma_c = threshold_gamma(&sys)?;
    hierarchy_with_threshold(params, spec, reference_gamma, gamma_c)
}

/// [`hierarchy`] with an externally computed multi-level threshold.
pub fn hierarchy_with_threshold<T: Real>(
    params: &ModelParams<T>,
    spec: &Spectrum<T>,
    reference_gamma: T,
    gamma_c: T,
) -> Result<HierarchyReport<T>> {
    let q = sign_observable(params.n_spins);
    let q01 = eigenbasis_element(spec, &q, 0, 1)?;
    let q01_sq = q01 * q01;
    let two = T::lit(2.0);
    let xi = -T::one() + (T::one() + two / q01_sq).sqrt();
    if !(xi > T::zero() && xi < T::one()) {
        return Err(invalid(
            "q01",
            format!("two-level K3 cannot exceed 1 (Q01^2 = {q01_sq})"),
        ));
    }
    let x = (T::one() / xi).ln();
    let t2_s = T::PI() / (T::lit(3.0) * spec.delta_e_rad_s() * x);
    let m2 = order_parameter(params.gamma_ratio).m_star.powi(2);
    let n = params.n();
    let gamma_a = two / (m2 * n * n * t2_s);
    let mean_jz2 = (jz2_expectation(spec, 0)? + jz2_expectation(spec, 1)?) / two;
    let gamma_b = T::one() / (t2_s * mean_jz2);
    let rates = dephasing_rates(params, reference_gamma)?;
    Ok(HierarchyReport {
        gamma_a,
        gamma_b,
        gamma_c,
        xi_root: xi,
        t2_threshold_ms: t2_s * T::lit(1000.0),
        reference_gamma,
        t2_coll_ms: rates.t2_coll_ms,
        t2_local_ms: rates.t2_local_ms,
        t2_phys_ms: t2_phys(spec, reference_gamma)?,
        ratio_ab: gamma_b / gamma_a,
        ratio_bc: gamma_c / gamma_b,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn collective_and_local_times() {
        let p = ModelParams::<f64>::benchmark();
        let r = dephasing_rates(&p, 0.05).unwrap();
        assert!((r.t2_coll_ms / 3.0 - 1.0).abs() < 0.02, "{}", r.t2_coll_ms);
        assert!(
            (r.t2_local_ms / 49.0 - 1.0).abs() < 0.02,
            "{}",
            r.t2_local_ms
        );
        // Gamma -> 0: local rate -> 2 N gamma.
        let p0 = ModelParams::<f64>::new(370, 1e-9).unwrap();
        let r0 = dephasing_rates(&p0, 0.05).unwrap();
        assert!((1000.0 / r0.t2_local_ms - 2.0 * 370.0 * 0.05).abs() < 1e-9);
    }

    #[test]
    fn two_level_ceiling() {
        let k = k3_two_level(f64::INFINITY, 1310.0, 0.9436).unwrap();
        assert!((k - 1.5 * 0.9436).abs() < 1e-12);
        assert!(k3_two_level(0.0, 1310.0, 0.9436).is_err());
    }
}
