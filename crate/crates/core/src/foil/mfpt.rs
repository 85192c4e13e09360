use rayon::prelude::*;
use serde::Serialize;

use crate::error::{invalid, Error, Result};
use crate::foil::langevin::LangevinConfig;
use crate::params::ModelParams;
use crate::semiclassics::{barrier, kramers_time, KramersMode};

/// Largest barrier exponent `N delta_f0 / k_B T` accepted for direct simulation.
pub const MAX_DESK_EXPONENT: f64 = 8.0;

/// Minimum number of observed first passages for an MFPT estimate.
pub const MIN_PASSAGES: usize = 50;

/// Sweeps shorter than this fraction of the Kramers time are treated as frozen.
pub const FROZEN_FRACTION: f64 = 0.01;

const MAX_STEPS_PER_PATH: f64 = 5e7;

/// Ensemble mean first-passage time from `-m_min` to `m >= 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MfptEstimate {
    pub mean_s: f64,
    pub stderr_s: f64,
    /// Mean in units of `1/J`.
    pub mean_dimensionless: f64,
    pub passages: usize,
    /// Paths that did not cross within the time budget (excluded from the mean).
    pub censored: usize,
    pub exponent: f64,
    /// Overdamped Kramers time for the same mobility.
    pub kramers_s: f64,
    pub seed: u64,
}

/// Estimates the mean first-passage time over the barrier. `time_budget` is
/// the per-path simulation limit in units of `1/J`.
pub fn mfpt_estimate(config: &LangevinConfig, time_budget: f64) -> Result<MfptEstimate> {
    let b = barrier(&config.params)?;
    if b.exponent > MAX_DESK_EXPONENT {
        return Err(Error::BarrierTooHigh {
            exponent: b.exponent,
            limit: MAX_DESK_EXPONENT,
        });
    }
    if !(time_budget > 0.0) || !time_budget.is_finite() {
        return Err(invalid(
            "time_budget",
            format!("must be finite and > 0, got {time_budget}"),
        ));
    }
    let max_steps = (time_budget / config.dt).ceil();
    if max_steps > MAX_STEPS_PER_PATH {
        return Err(invalid(
            "time_budget",
            format!("{max_steps:e} steps per path exceeds {MAX_STEPS_PER_PATH:e}"),
        ));
    }
    let max_steps = max_steps as usize;
    let h = config.params.bias_h;
    let start = -b.m_min;
    let times: Vec<Option<f64>> = (0..config.n_paths)
        .into_par_iter()
        .map(|i| {
            let mut rng = config.rng(i);
            let mut m = start;
            for k in 1..=max_steps {
                m = config.step(m, h, &mut rng);
                if m >= 0.0 {
                    return Some(k as f64 * config.dt);
                }
            }
            None
        })
        .collect();
    let hits: Vec<f64> = times.iter().flatten().copied().collect();
    if hits.len() < MIN_PASSAGES {
        return Err(Error::TooFewPassages {
            observed: hits.len(),
            required: MIN_PASSAGES,
        });
    }
    let n = hits.len() as f64;
    let mean = hits.iter().sum::<f64>() / n;
    let var = hits.iter().map(|t| (t - mean).powi(2)).sum::<f64>() / (n - 1.0);
    let j = config.params.j_phys;
    let kramers = kramers_time(&config.params, config.gamma_eff, KramersMode::Full)?;
    Ok(MfptEstimate {
        mean_s: mean / j,
        stderr_s: (var / n).sqrt() / j,
        mean_dimensionless: mean,
        passages: hits.len(),
        censored: times.len() - hits.len(),
        exponent: b.exponent,
        kramers_s: kramers.seconds,
        seed: config.seed,
    })
}

/// Linear bias sweep from `-delta_h` to `+delta_h` used by [`classical_p_error`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ClassicalSweep {
    /// Sweep amplitude in units of `J`.
    pub delta_h: f64,
    pub dt: f64,
    pub n_paths: usize,
    pub seed: u64,
}

/// Probability that the classical order parameter ends in the well
/// disfavoured by the final bias after a sweep of duration `tau_q_s`.
///
/// Sweeps much shorter than the Kramers time return `1` without simulation.
pub fn classical_p_error(
    tau_q_s: f64,
    params: &ModelParams<f64>,
    gamma_eff: f64,
    sweep: &ClassicalSweep,
) -> Result<f64> {
    if !(tau_q_s >= 0.0) || !tau_q_s.is_finite() {
        return Err(invalid(
            "tau_q",
            format!("must be finite and >= 0, got {tau_q_s}"),
        ));
    }
    if !(sweep.delta_h > 0.0) || !sweep.delta_h.is_finite() {
        return Err(invalid(
            "delta_h",
            format!("must be finite and > 0, got {}", sweep.delta_h),
        ));
    }
    let mut p = *params;
    p.bias_h = 0.0;
    let tau_k = kramers_time(&p, gamma_eff, KramersMode::Full)?.seconds;
    if tau_q_s < FROZEN_FRACTION * tau_k {
        return Ok(1.0);
    }
    let config = LangevinConfig::new(p, gamma_eff, sweep.dt, sweep.n_paths, sweep.seed)?;
    let duration = tau_q_s * p.j_phys;
    let steps = (duration / sweep.dt).ceil();
    if steps > MAX_STEPS_PER_PATH {
        return Err(invalid(
            "tau_q",
            format!("{steps:e} steps per path exceeds {MAX_STEPS_PER_PATH:e}"),
        ));
    }
    let steps = steps.max(1.0) as usize;
    let start = -barrier(&p)?.m_min;
    let dh = sweep.delta_h;
    let wrong: usize = (0..config.n_paths)
        .into_par_iter()
        .map(|i| {
            let mut rng = config.rng(i);
            let mut m = start;
            for k in 0..steps {
                let s = (k as f64 + 0.5) / steps as f64;
                m = config.step(m, -dh + 2.0 * dh * s, &mut rng);
            }
            usize::from(m < 0.0)
        })
        .sum();
    Ok(wrong as f64 / config.n_paths as f64)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn benchmark_barrier_is_refused() {
        let c = LangevinConfig::new(ModelParams::benchmark(), 1.0, 0.05, 10, 0).unwrap();
        assert!(matches!(
            mfpt_estimate(&c, 100.0),
            Err(Error::BarrierTooHigh { .. })
        ));
    }

    #[test]
    fn too_few_passages_reported() {
        let p = ModelParams::new(20, 0.9)
            .unwrap()
            .with_temp_nk(5.68)
            .unwrap();
        let c = LangevinConfig::new(p, 1.0, 0.05, 60, 3).unwrap();
        assert!(matches!(
            mfpt_estimate(&c, 1.0),
            Err(Error::TooFewPassages { .. })
        ));
    }

    #[test]
    fn fast_sweeps_are_frozen() {
        let s = ClassicalSweep {
            delta_h: 0.003,
            dt: 1.0,
            n_paths: 10,
            seed: 0,
        };
        assert_eq!(
            classical_p_error(1e-3, &ModelParams::benchmark(), 1.0, &s).unwrap(),
            1.0
        );
        assert_eq!(
            classical_p_error(0.0, &ModelParams::benchmark(), 1.0, &s).unwrap(),
            1.0
        );
    }
}
