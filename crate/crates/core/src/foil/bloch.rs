use serde::Serialize;

use crate::error::{invalid, Result};
use crate::params::ModelParams;
use crate::scalar::Real;

/// Largest accepted RK4 step, in units of `1/J`.
pub const MAX_BLOCH_DT: f64 = 1e-3;

/// Mean-field Bloch vector.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BlochState<T> {
    pub mx: T,
    pub my: T,
    pub mz: T,
}

impl<T: Real> BlochState<T> {
    pub fn new(mx: T, my: T, mz: T) -> Self {
        Self { mx, my, mz }
    }

    pub fn norm(&self) -> T {
        (self.mx * self.mx + self.my * self.my + self.mz * self.mz).sqrt()
    }

    /// Tilted ordered fixed point `(Gamma/J, 0, m*)` at zero bias.
    pub fn ordered_fixed_point(gamma_ratio: T) -> Self {
        let g = gamma_ratio.min(T::one());
        Self::new(g, T::zero(), (T::one() - g * g).sqrt())
    }

    fn rate(&self, gamma: T, h: T) -> Self {
        let two = T::lit(2.0);
        let field = self.mz + h;
        Self {
            mx: two * field * self.my,
            my: -two * field * self.mx + two * gamma * self.mz,
            mz: -two * gamma * self.my,
        }
    }

    fn add_scaled(&self, k: &Self, s: T) -> Self {
        Self::new(self.mx + s * k.mx, self.my + s * k.my, self.mz + s * k.mz)
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct BlochTrajectory<T> {
    pub times: Vec<T>,
    pub states: Vec<BlochState<T>>,
}

/// Classical RK4 integration of the reactive mean-field equations
/// `mz' = -2 Gamma my`, `my' = -2 (mz + h) mx + 2 Gamma mz`, `mx' = 2 (mz + h) my`.
pub fn integrate_bloch<T: Real>(
    state: BlochState<T>,
    params: &ModelParams<T>,
    t_final: T,
    dt: T,
) -> Result<BlochTrajectory<T>> {
    if !(dt > T::zero()) || dt > T::lit(MAX_BLOCH_DT) {
        return Err(invalid(
            "dt",
            format!("need 0 < dt <= {MAX_BLOCH_DT}, got {dt}"),
        ));
    }
    if !(t_final >= T::zero()) || !t_final.is_finite() {
        return Err(invalid(
            "t_final",
            format!("must be finite and >= 0, got {t_final}"),
        ));
    }
    if (state.norm() - T::one()).abs() > T::lit(1e-9).max(T::lit(10.0) * T::epsilon()) {
        return Err(invalid(
            "state",
            format!(
                "initial Bloch vector must have unit norm, got {}",
                state.norm()
            ),
        ));
    }
    let (g, h) = (params.gamma_ratio, params.bias_h);
    let steps = (t_final / dt).ceil().to_usize().unwrap_or(0);
    let mut times = Vec::with_capacity(steps + 1);
    let mut states = Vec::with_capacity(steps + 1);
    let mut m = state;
    let mut t = T::zero();
    times.push(t);
    states.push(m);
    let half = T::lit(0.5);
    let sixth = T::one() / T::lit(6.0);
    for _ in 0..steps {
        let step = dt.min(t_final - t);
        let k1 = m.rate(g, h);
        let k2 = m.add_scaled(&k1, half * step).rate(g, h);
        let k3 = m.add_scaled(&k2, half * step).rate(g, h);
        let k4 = m.add_scaled(&k3, step).rate(g, h);
        m = BlochState::new(
            m.mx + sixth * step * (k1.mx + T::lit(2.0) * (k2.mx + k3.mx) + k4.mx),
            m.my + sixth * step * (k1.my + T::lit(2.0) * (k2.my + k3.my) + k4.my),
            m.mz + sixth * step * (k1.mz + T::lit(2.0) * (k2.mz + k3.mz) + k4.mz),
        );
        t += step;
        times.push(t);
        states.push(m);
    }
    Ok(BlochTrajectory { times, states })
}

/// Angular frequency estimated from upward zero crossings of `values - mean(values)`.
/// Returns `None` with fewer than two crossings.
pub fn zero_crossing_frequency<T: Real>(times: &[T], values: &[T]) -> Option<T> {
    let mean = values.iter().copied().sum::<T>() / T::of_usize(values.len().max(1));
    let mut crossings = Vec::new();
    for i in 1..values.len().min(times.len()) {
        let (a, b) = (values[i - 1] - mean, values[i] - mean);
        if a < T::zero() && b >= T::zero() {
            crossings.push(times[i - 1] + (times[i] - times[i - 1]) * (-a) / (b - a));
        }
    }
    if crossings.len() < 2 {
        return None;
    }
    let period = (crossings[crossings.len() - 1] - crossings[0]) / T::of_usize(crossings.len() - 1);
    Some(T::TAU() / period)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixed_point_is_stationary() {
        let p = ModelParams::<f64>::new(100, 0.5).unwrap();
        let fp = BlochState::ordered_fixed_point(0.5);
        let tr = integrate_bloch(fp, &p, 100.0, 1e-3).unwrap();
        let last = tr.states.last().unwrap();
        assert!(
            (last.mx - fp.mx).abs() < 1e-9
                && last.my.abs() < 1e-9
                && (last.mz - fp.mz).abs() < 1e-9
        );
    }

    #[test]
    fn small_oscillation_frequency() {
        let p = ModelParams::<f64>::new(100, 0.5).unwrap();
        let fp = BlochState::ordered_fixed_point(0.5);
        let tilt = 1e-3f64;
        let (c, s) = (tilt.cos(), tilt.sin());
        let start = BlochState::new(c * fp.mx - s * fp.mz, 0.0, s * fp.mx + c * fp.mz);
        let tr = integrate_bloch(start, &p, 40.0, 1e-3).unwrap();
        let my: Vec<f64> = tr.states.iter().map(|m| m.my).collect();
        let w = zero_crossing_frequency(&tr.times, &my).unwrap();
        assert!((w / 3f64.sqrt() - 1.0).abs() < 0.01, "{w}");
    }

    #[test]
    fn norm_is_conserved() {
        let p = ModelParams::<f64>::new(100, 0.7)
            .unwrap()
            .with_bias(0.05)
            .unwrap();
        let s = BlochState::new(0.6, 0.0, 0.8);
        let tr = integrate_bloch(s, &p, 10.0, 1e-3).unwrap();
        let drift = tr
            .states
            .iter()
            .map(|m| (m.norm() - 1.0).abs())
            .fold(0.0, f64::max);
        assert!(drift < 1e-8 * 10.0);
    }

    #[test]
    fn pole_is_fixed_without_transverse_field() {
        let p = ModelParams::<f64>::new(100, 0.0).unwrap();
        let tr = integrate_bloch(BlochState::new(0.0, 0.0, 1.0), &p, 5.0, 1e-3).unwrap();
        assert_eq!(*tr.states.last().unwrap(), BlochState::new(0.0, 0.0, 1.0));
    }

    #[test]
    fn step_and_norm_validation() {
        let p = ModelParams::<f64>::new(100, 0.5).unwrap();
        assert!(integrate_bloch(BlochState::new(0.0, 0.0, 1.0), &p, 1.0, 1e-2).is_err());
        assert!(integrate_bloch(BlochState::new(0.0, 0.0, 0.9), &p, 1.0, 1e-3).is_err());
    }
}
