use serde::Serialize;

use crate::error::{invalid, Result};
use crate::linalg::{CMatrix, Matrix};
use crate::lmg::{jz2_expectation, Spectrum};
use crate::open_system::density::{lueders_instrument, DensityOperator};
use crate::open_system::level_system::LevelSystem;
use crate::open_system::superoperator::build_superoperator;
use crate::roots::{brent_with_values, widen_bracket, RootOptions};
use crate::scalar::Real;

/// Initial bracket for the threshold search, in s^-1.
pub const DEFAULT_THRESHOLD_BRACKET: (f64, f64) = (0.2, 0.5);
/// Outermost bracket reached by geometric widening, in s^-1.
pub const THRESHOLD_WIDEN_LIMITS: (f64, f64) = (0.05, 2.0);
/// Absolute tolerance of the threshold root, in s^-1.
pub const THRESHOLD_TOLERANCE: f64 = 1e-4;

/// Two-time correlators and the resulting `K3 = C12 + C23 - C13`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct K3Record<T> {
    pub c12: T,
    pub c23: T,
    pub c13: T,
    pub k3: T,
}

/// Optimal spacing `pi / (3 Delta E)` in units of `1/J`.
pub fn default_dt<T: Real>(sys: &LevelSystem<T>) -> T {
    T::PI() / (T::lit(3.0) * sys.delta_e)
}

fn resolve_dt<T: Real>(sys: &LevelSystem<T>, dt: Option<T>) -> Result<T> {
    let dt = dt.unwrap_or_else(|| default_dt(sys));
    if !dt.is_finite() || dt <= T::zero() {
        return Err(invalid("dt", format!("must be finite and > 0, got {dt}")));
    }
    Ok(dt)
}

fn check_rate<T: Real>(gamma_per_s: T) -> Result<()> {
    if !gamma_per_s.is_finite() || gamma_per_s < T::zero() {
        return Err(invalid(
            "gamma_phi",
            format!("must be finite and >= 0, got {gamma_per_s}"),
        ));
    }
    Ok(())
}

fn readout<T: Real>(q: &CMatrix<T>, x: &CMatrix<T>) -> T {
    q.trace_product(x).re
}

/// Stationary-protocol `K3 = 2 C12 - C13` from the ground state.
pub fn k3_stationary<T: Real>(sys: &LevelSystem<T>, gamma_per_s: T, dt: Option<T>) -> Result<T> {
    Ok(k3_stationary_record(sys, gamma_per_s, dt)?.k3)
}

/// Stationary protocol from the ground state, with the correlators.
pub fn k3_stationary_record<T: Real>(
    sys: &LevelSystem<T>,
    gamma_per_s: T,
    dt: Option<T>,
) -> Result<K3Record<T>> {
    let rho0 = DensityOperator::pure(sys.n_levels, 0)?;
    k3_stationary_from(sys, &rho0, &sys.q, gamma_per_s, dt)
}

/// Stationary protocol for an arbitrary initial state and instrument.
///
/// `C1j = Tr[Q exp(L j dt) (1/2 {Q_inst, rho0})]`, read out with the full
/// `Q`; `C23` is identified with `C12`.
pub fn k3_stationary_from<T: Real>(
    sys: &LevelSystem<T>,
    rho0: &DensityOperator<T>,
    instrument: &Matrix<T>,
    gamma_per_s: T,
    dt: Option<T>,
) -> Result<K3Record<T>> {
    check_rate(gamma_per_s)?;
    let dt = resolve_dt(sys, dt)?;
    let l = build_superoperator(sys, sys.dimensionless_rate(gamma_per_s))?;
    let p = l.propagator(dt)?;
    let q = sys.q.to_complex();
    let x0 = lueders_instrument(instrument, rho0.matrix())?;
    let x1 = p.apply(&x0)?;
    let x2 = p.apply(&x1)?;
    let c12 = readout(&q, &x1);
    let c13 = readout(&q, &x2);
    Ok(K3Record {
        c12,
        c23: c12,
        c13,
        k3: T::lit(2.0) * c12 - c13,
    })
}

/// Strictly sequential protocol from the ground state.
///
/// `C12` and `C13` use the instrument at `t = 0`; `C23` evolves the
/// undisturbed state to `dt`, applies the instrument and evolves by `dt`.
pub fn k3_sequential<T: Real>(
    sys: &LevelSystem<T>,
    gamma_per_s: T,
    dt: Option<T>,
) -> Result<K3Record<T>> {
    check_rate(gamma_per_s)?;
    let dt = resolve_dt(sys, dt)?;
    let l = build_superoperator(sys, sys.dimensionless_rate(gamma_per_s))?;
    let p = l.propagator(dt)?;
    let q = sys.q.to_complex();
    let rho0 = DensityOperator::pure(sys.n_levels, 0)?;
    let x0 = lueders_instrument(&sys.q, rho0.matrix())?;
    let x1 = p.apply(&x0)?;
    let x2 = p.apply(&x1)?;
    let c12 = readout(&q, &x1);
    let c13 = readout(&q, &x2);
    let rho1 = p.apply(rho0.matrix())?;
    let y = p.apply(&lueders_instrument(&sys.q, &rho1)?)?;
    let c23 = readout(&q, &y);
    Ok(K3Record {
        c12,
        c23,
        c13,
        k3: c12 + c23 - c13,
    })
}

/// Dephasing rate (s^-1) at which the stationary `K3` falls to 1, searched
/// from the default bracket.
pub fn threshold_gamma<T: Real>(sys: &LevelSystem<T>) -> Result<T> {
    let (lo, hi) = DEFAULT_THRESHOLD_BRACKET;
    threshold_gamma_in(sys, (T::lit(lo), T::lit(hi)))
}

/// As [`threshold_gamma`] from a caller-supplied bracket. The bracket is
/// widened geometrically up to [`THRESHOLD_WIDEN_LIMITS`] when it does not
/// straddle the root.
pub fn threshold_gamma_in<T: Real>(sys: &LevelSystem<T>, bracket: (T, T)) -> Result<T> {
    let (lo, hi) = bracket;
    if !(lo > T::zero() && hi > lo && hi.is_finite()) {
        return Err(invalid(
            "bracket",
            format!("need 0 < lo < hi, got [{lo}, {hi}]"),
        ));
    }
    let dt = default_dt(sys);
    let mut failure = None;
    let mut objective = |g: T| match k3_stationary(sys, g, Some(dt)) {
        Ok(k) => k - T::one(),
        Err(e) => {
            failure.get_or_insert(e);
            T::nan()
        }
    };
    let (min_lo, max_hi) = THRESHOLD_WIDEN_LIMITS;
    let widened = widen_bracket(
        &mut objective,
        lo,
        hi,
        T::lit(min_lo).min(lo),
        T::lit(max_hi).max(hi),
    );
    let (a, fa, b, fb) = match widened {
        Ok(v) => v,
        Err(e) => return Err(failure.take().unwrap_or(e)),
    };
    let opts = RootOptions {
        xtol: T::lit(THRESHOLD_TOLERANCE * 1e-2),
        ..RootOptions::default()
    };
    let root = brent_with_values(&mut objective, a, fa, b, fb, opts);
    match failure {
        Some(e) => Err(e),
        None => root,
    }
}

/// Collective-dephasing coherence time of the ground doublet in ms,
/// `1/T2 = (gamma/2)(<E0|Jz^2|E0> + <E1|Jz^2|E1>)` with full-space expectations.
pub fn t2_phys<T: Real>(spec: &Spectrum<T>, gamma_per_s: T) -> Result<T> {
    if !gamma_per_s.is_finite() || gamma_per_s <= T::zero() {
        return Err(invalid(
            "gamma_phi",
            format!("must be finite and > 0, got {gamma_per_s}"),
        ));
    }
    let s = jz2_expectation(spec, 0)? + jz2_expectation(spec, 1)?;
    Ok(T::lit(1000.0) / (gamma_per_s * s / T::lit(2.0)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lmg::{build_hamiltonian, diagonalize, sign_observable};
    use crate::open_system::truncate;
    use crate::params::ModelParams;

    fn system(n: usize) -> LevelSystem<f64> {
        let p = ModelParams::<f64>::new(40, 0.8).unwrap();
        let s = diagonalize(&build_hamiltonian(&p).unwrap()).unwrap();
        truncate(&s, &sign_observable(40), n).unwrap()
    }

    #[test]
    fn dichotomic_two_level_protocols_agree() {
        // With Q^2 = I on a two-level system and no dephasing, the sequential
        // and stationary correlators coincide.
        let mut sys = system(2);
        sys.q = Matrix::from_row_major(2, 2, vec![0.0, 1.0, 1.0, 0.0]).unwrap();
        let a = k3_stationary_record(&sys, 0.0, None).unwrap();
        let b = k3_sequential(&sys, 0.0, None).unwrap();
        assert!((a.k3 - b.k3).abs() < 1e-9);
        // cos(pi/3) + cos(pi/3) - cos(2 pi/3)
        assert!((a.k3 - 1.5).abs() < 1e-9);
    }

    #[test]
    fn stronger_dephasing_lowers_k3() {
        let sys = system(4);
        let weak = k3_stationary(&sys, 1.0, None).unwrap();
        let strong = k3_stationary(&sys, 100.0, None).unwrap();
        assert!(strong < weak);
    }

    #[test]
    fn rejects_bad_inputs() {
        let sys = system(3);
        assert!(k3_stationary(&sys, -1.0, None).is_err());
        assert!(k3_stationary(&sys, 1.0, Some(0.0)).is_err());
        assert!(threshold_gamma_in(&sys, (0.5, 0.2)).is_err());
    }

    #[test]
    fn missing_root_is_reported() {
        // Far above threshold everywhere in the widening range.
        let mut sys = system(2);
        sys.j_phys = 1e9;
        assert!(threshold_gamma(&sys).is_err());
    }
}
