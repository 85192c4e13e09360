use rayon::prelude::*;
use serde::Serialize;

use crate::error::{invalid, Error, Result};
use crate::lmg::{build_hamiltonian, diagonalize};
use crate::params::ModelParams;
use crate::roots::{brent_with_values, RootOptions};
use crate::scalar::Real;
use crate::semiclassics::instanton::instanton_action;

/// Fitted instanton prefactors `C0 / k_B T`, keyed by `Gamma/J`.
pub const TABLE_C0: [(f64, f64); 3] = [(0.99, 2.51), (0.95, 2.546), (0.90, 2.616)];

/// Relative uncertainty of the fitted prefactors.
pub const C0_UNCERTAINTY: f64 = 0.05;

const N_MAX: f64 = 1e5;
const SCAN_POINTS: usize = 400;

/// Tabulated prefactor for one of the fitted transverse fields.
pub fn table_c0(gamma_ratio: f64) -> Option<f64> {
    TABLE_C0
        .iter()
        .find(|(g, _)| (g - gamma_ratio).abs() < 1e-9)
        .map(|&(_, c)| c)
}

/// Finite-size crossover where the instanton gap `C0 sqrt(N) e^{-N S}` equals `k_B T`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GoldilocksRow<T> {
    pub gamma_ratio: T,
    pub s_inst: T,
    /// `ln(C0/k_B T) / S`, dropping the `sqrt(N)` prefactor.
    pub nc_analytic: T,
    /// Root of `C0 sqrt(N) e^{-N S} = k_B T`.
    pub nc_root: T,
    pub c0_over_kbt: T,
}

/// Crossover rows with the prefactor scaled by `1 -/+ C0_UNCERTAINTY`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GoldilocksBand<T> {
    pub low: GoldilocksRow<T>,
    pub central: GoldilocksRow<T>,
    pub high: GoldilocksRow<T>,
}

pub fn goldilocks<T: Real>(gamma_ratio: T, c0_over_kbt: T) -> Result<GoldilocksRow<T>> {
    if !c0_over_kbt.is_finite() || c0_over_kbt <= T::zero() {
        return Err(invalid(
            "c0_over_kbt",
            format!("must be finite and > 0, got {c0_over_kbt}"),
        ));
    }
    let s = instanton_action(gamma_ratio)?.closed_form;
    let ln_c0 = c0_over_kbt.ln();
    let mut g = |n: T| ln_c0 + n.ln() / T::lit(2.0) - n * s;
    // g rises up to N = 1/(2S) and falls afterwards; the physical root lies beyond the maximum.
    let lo = T::one().max(T::one() / (T::lit(2.0) * s));
    let hi = T::lit(N_MAX);
    let g_lo = g(lo);
    if g_lo <= T::zero() || hi <= lo {
        return Err(Error::NoBracket {
            lo: lo.to_f64_lossy(),
            hi: hi.to_f64_lossy(),
            f_lo: g_lo.to_f64_lossy(),
            f_hi: g(hi).to_f64_lossy(),
        });
    }
    let ratio = (hi / lo).ln() / T::of_usize(SCAN_POINTS);
    let mut a = lo;
    let mut fa = g_lo;
    let mut bracket = None;
    for k in 1..=SCAN_POINTS {
        let b = if k == SCAN_POINTS {
            hi
        } else {
            lo * (ratio * T::of_usize(k)).exp()
        };
        let fb = g(b);
        if fb <= T::zero() {
            bracket = Some((a, fa, b, fb));
            break;
        }
        a = b;
        fa = fb;
    }
    let (a, fa, b, fb) = bracket.ok_or(Error::NoBracket {
        lo: lo.to_f64_lossy(),
        hi: hi.to_f64_lossy(),
        f_lo: g_lo.to_f64_lossy(),
        f_hi: g(hi).to_f64_lossy(),
    })?;
    let nc_root = brent_with_values(&mut g, a, fa, b, fb, RootOptions::default())?;
    Ok(GoldilocksRow {
        gamma_ratio,
        s_inst: s,
        nc_analytic: ln_c0 / s,
        nc_root,
        c0_over_kbt,
    })
}

/// [`goldilocks`] at `C0 (1 - C0_UNCERTAINTY)`, `C0` and `C0 (1 + C0_UNCERTAINTY)`.
pub fn goldilocks_band<T: Real>(gamma_ratio: T, c0_over_kbt: T) -> Result<GoldilocksBand<T>> {
    let d = T::lit(C0_UNCERTAINTY);
    Ok(GoldilocksBand {
        low: goldilocks(gamma_ratio, c0_over_kbt * (T::one() - d))?,
        central: goldilocks(gamma_ratio, c0_over_kbt)?,
        high: goldilocks(gamma_ratio, c0_over_kbt * (T::one() + d))?,
    })
}

/// Exact tunnel splitting at one system size compared against `k_B T`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GapScanRow<T> {
    pub n_spins: usize,
    pub delta_e_rad_s: T,
    pub kbt_rad_s: T,
    /// `Delta E / k_B T`.
    pub gap_over_kbt: T,
}

/// Exact `Delta E(N)` for each requested `N`, diagonalized in parallel and
/// returned in input order.
pub fn gap_scan<T: Real>(params: &ModelParams<T>, sizes: &[usize]) -> Result<Vec<GapScanRow<T>>> {
    sizes
        .par_iter()
        .map(|&n| {
            let p = params.with_n_spins(n)?;
            let de = diagonalize(&build_hamiltonian(&p)?)?.delta_e_rad_s();
            let kbt = p.kbt_rad_s();
            Ok(GapScanRow {
                n_spins: n,
                delta_e_rad_s: de,
                kbt_rad_s: kbt,
                gap_over_kbt: de / kbt,
            })
        })
        .collect()
}

/// `d Delta E / d N` in rad/s per spin, by central difference over `N -/+ 2`
/// (keeping the parity of `N`).
pub fn gap_derivative<T: Real>(params: &ModelParams<T>) -> Result<T> {
    let n = params.n_spins;
    if n < 4 {
        return Err(invalid(
            "n_spins",
            format!("need N >= 4 for the N -/+ 2 stencil, got {n}"),
        ));
    }
    let rows = gap_scan(params, &[n - 2, n + 2])?;
    Ok((rows[1].delta_e_rad_s - rows[0].delta_e_rad_s) / T::lit(4.0))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn root_exceeds_analytic_estimate() {
        for &(g, c0) in &TABLE_C0 {
            let r = goldilocks(g, c0).unwrap();
            assert!(r.nc_root > r.nc_analytic);
            let ratio = r.nc_root / r.nc_analytic;
            assert!(ratio > 3.0 && ratio < 6.0, "{g}: {ratio}");
        }
    }

    #[test]
    fn band_brackets_central_value() {
        let b = goldilocks_band(0.95, 2.546).unwrap();
        assert!(b.low.nc_root < b.central.nc_root && b.central.nc_root < b.high.nc_root);
    }

    #[test]
    fn small_prefactor_has_no_root() {
        assert!(goldilocks(0.95f64, 1e-3).is_err());
        assert!(goldilocks(0.95f64, -1.0).is_err());
    }

    #[test]
    fn table_lookup() {
        assert_eq!(table_c0(0.95), Some(2.546));
        assert_eq!(table_c0(0.8), None);
    }

    #[test]
    fn scan_preserves_order() {
        let p = ModelParams::<f64>::new(10, 0.9).unwrap();
        let rows = gap_scan(&p, &[30, 10, 20]).unwrap();
        assert_eq!(
            rows.iter().map(|r| r.n_spins).collect::<Vec<_>>(),
            vec![30, 10, 20]
        );
        assert!(rows[1].delta_e_rad_s > rows[2].delta_e_rad_s);
    }
}
