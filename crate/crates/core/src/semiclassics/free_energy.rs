use serde::Serialize;

use crate::error::{Error, Result};
use crate::params::ModelParams;
use crate::roots::{brent, RootOptions};
use crate::scalar::Real;
use crate::semiclassics::mean_field::order_parameter;

/// Central-difference step for curvatures of the free energy.
pub const CURVATURE_STEP: f64 = 1e-5;

/// `ln(2 cosh x)` without overflow.
fn ln_two_cosh<T: Real>(x: T) -> T {
    let a = x.abs();
    a + (-(a + a)).exp().ln_1p()
}

/// Mean-field free energy per spin in units of `J`,
/// `f(m) = m^2/2 - T ln[2 cosh(sqrt((m + h)^2 + Gamma^2) / T)]`.
pub fn free_energy<T: Real>(m: T, params: &ModelParams<T>) -> T {
    let t = params.kbt();
    let e = ((m + params.bias_h).powi(2) + params.gamma_ratio.powi(2)).sqrt();
    m * m / T::lit(2.0) - t * ln_two_cosh(e / t)
}

/// `df/dm = m - (m + h)/E tanh(E/T)`.
pub fn free_energy_derivative<T: Real>(m: T, params: &ModelParams<T>) -> T {
    let t = params.kbt();
    let x = m + params.bias_h;
    let e = (x * x + params.gamma_ratio.powi(2)).sqrt();
    if e == T::zero() {
        return m;
    }
    m - x / e * (e / t).tanh()
}

/// `d^2 f/dm^2` by central differences with step [`CURVATURE_STEP`].
pub fn free_energy_curvature<T: Real>(m: T, params: &ModelParams<T>) -> T {
    let h = T::lit(CURVATURE_STEP);
    (free_energy(m + h, params) - T::lit(2.0) * free_energy(m, params) + free_energy(m - h, params))
        / (h * h)
}

/// Free-energy barrier of the symmetric (`h = 0`) landscape.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Barrier<T> {
    /// Location of the thermal minimum on the `m > 0` side.
    pub m_min: T,
    /// `f(0) - f(m_min)` in units of `J`.
    pub delta_f0: T,
    /// `delta_f0` in rad/s.
    pub delta_f0_rad_s: T,
    /// `N delta_f0 / k_B T`.
    pub exponent: T,
    /// Large-argument approximation `1 - Gamma - m*^2/2`, in units of `J`.
    pub delta_f0_approx: T,
}

/// Barrier height at `h = 0` from the exact free energy. The bias of
/// `params` is ignored.
pub fn barrier<T: Real>(params: &ModelParams<T>) -> Result<Barrier<T>> {
    let mut p = params.validated()?;
    p.bias_h = T::zero();
    let op = order_parameter(p.gamma_ratio);
    if !op.ordered || op.m_star == T::zero() {
        return Err(Error::DisorderedPhase(p.gamma_ratio.to_f64_lossy()));
    }
    let lo = T::lit(1e-8);
    let df = |m: T| free_energy_derivative(m, &p);
    if df(lo) >= T::zero() {
        // Thermal fluctuations have restored the symmetric phase.
        return Err(Error::DisorderedPhase(p.gamma_ratio.to_f64_lossy()));
    }
    let m_min = brent(df, lo, T::one(), RootOptions::default())?;
    let delta_f0 = free_energy(T::zero(), &p) - free_energy(m_min, &p);
    let g = p.gamma_ratio;
    Ok(Barrier {
        m_min,
        delta_f0,
        delta_f0_rad_s: delta_f0 * p.j_phys,
        exponent: p.n() * delta_f0 / p.kbt(),
        delta_f0_approx: T::one() - g - op.m_star * op.m_star / T::lit(2.0),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn symmetric_at_zero_bias() {
        let p = ModelParams::<f64>::benchmark();
        for &m in &[0.1, 0.3, 0.77, 1.0] {
            assert!((free_energy(m, &p) - free_energy(-m, &p)).abs() < 1e-12);
        }
    }

    #[test]
    fn derivative_matches_finite_difference() {
        let p = ModelParams::<f64>::new(20, 0.9)
            .unwrap()
            .with_temp_nk(3.0)
            .unwrap()
            .with_bias(0.01)
            .unwrap();
        for &m in &[-0.8, -0.2, 0.05, 0.4] {
            let h = 1e-6;
            let fd = (free_energy(m + h, &p) - free_energy(m - h, &p)) / (2.0 * h);
            assert!((fd - free_energy_derivative(m, &p)).abs() < 1e-7);
        }
    }

    #[test]
    fn huge_arguments_do_not_overflow() {
        let p = ModelParams::<f64>::new(20, 0.9)
            .unwrap()
            .with_temp_nk(1e-9)
            .unwrap();
        assert!(free_energy(0.3, &p).is_finite());
    }

    #[test]
    fn barrier_matches_approximation_at_low_temperature() {
        let b = barrier(&ModelParams::<f64>::benchmark()).unwrap();
        assert!(((b.delta_f0 - b.delta_f0_approx) / b.delta_f0_approx).abs() < 0.01);
        assert!(free_energy_curvature(b.m_min, &ModelParams::benchmark()) > 0.0);
    }

    #[test]
    fn disordered_phase_rejected() {
        assert!(matches!(
            barrier(&ModelParams::<f64>::new(20, 1.1).unwrap()),
            Err(Error::DisorderedPhase(_))
        ));
        // Hot enough to wash out the ordered minimum.
        let hot = ModelParams::<f64>::new(20, 0.95)
            .unwrap()
            .with_temp_nk(1e4)
            .unwrap();
        assert!(barrier(&hot).is_err());
    }
}
