use serde::Serialize;

use crate::error::{invalid, Error, Result};
use crate::lmg::{eigenbasis_element, Spectrum};
use crate::scalar::Real;

/// Odd-parity levels coupled to the ground state by `Q`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CoherentInputs<T> {
    pub levels: Vec<usize>,
    pub q_k0_sq: Vec<T>,
    /// `(E_k - E_0) / (E_1 - E_0)`.
    pub gap_ratios: Vec<T>,
}

/// Collects `Q_k0^2` and gap ratios for the odd `k < n_levels`.
pub fn coherent_inputs<T: Real>(
    spec: &Spectrum<T>,
    q_diag: &[T],
    n_levels: usize,
) -> Result<CoherentInputs<T>> {
    if n_levels < 2 || n_levels > spec.dim() {
        return Err(invalid(
            "n_levels",
            format!("must lie in 2..={}, got {n_levels}", spec.dim()),
        ));
    }
    let levels: Vec<usize> = (1..n_levels).step_by(2).collect();
    let mut q_k0_sq = Vec::with_capacity(levels.len());
    let mut gap_ratios = Vec::with_capacity(levels.len());
    for &k in &levels {
        q_k0_sq.push(eigenbasis_element(spec, q_diag, k, 0)?.powi(2));
        gap_ratios.push(spec.gap_ratio(k)?);
    }
    Ok(CoherentInputs {
        levels,
        q_k0_sq,
        gap_ratios,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CoherentK3<T> {
    pub k3: T,
    pub contributions: Vec<T>,
}

/// Dephasing-free multi-level correlator
/// `K3 = sum_k Q_k0^2 [2 cos(r_k pi/3 tau) - cos(2 r_k pi/3 tau)]`,
/// with `tau` in units of the optimal two-level spacing.
pub fn k3_coherent_multilevel<T: Real>(
    q_k0_sq: &[T],
    gap_ratios: &[T],
    tau_over_tau_star: T,
) -> Result<CoherentK3<T>> {
    if q_k0_sq.len() != gap_ratios.len() {
        return Err(Error::DimensionMismatch {
            expected: q_k0_sq.len(),
            found: gap_ratios.len(),
        });
    }
    let phase = T::PI() / T::lit(3.0) * tau_over_tau_star;
    let contributions: Vec<T> = q_k0_sq
        .iter()
        .zip(gap_ratios)
        .map(|(&w, &r)| w * (T::lit(2.0) * (r * phase).cos() - (T::lit(2.0) * r * phase).cos()))
        .collect();
    Ok(CoherentK3 {
        k3: contributions.iter().copied().sum(),
        contributions,
    })
}
