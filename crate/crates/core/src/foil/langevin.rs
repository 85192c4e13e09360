use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{invalid, Result};
use crate::params::ModelParams;
use crate::semiclassics::{barrier, free_energy_derivative};

/// Default mobility in units where time is measured in `1/J`.
pub const DEFAULT_GAMMA_EFF: f64 = 1.0;

/// Largest allowed drift step as a fraction of the well half-width.
pub const MAX_DRIFT_FRACTION: f64 = 0.1;

const DRIFT_SCAN_POINTS: usize = 401;

/// Overdamped Langevin ensemble settings.
///
/// Time is dimensionless (`1/J`); divide by `params.j_phys` for seconds.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LangevinConfig {
    pub params: ModelParams<f64>,
    /// Mobility multiplying `-f'(m)`.
    pub gamma_eff: f64,
    pub dt: f64,
    pub n_paths: usize,
    pub seed: u64,
}

impl LangevinConfig {
    /// Validates the configuration. The drift step `dt Gamma_eff max|f'|` over
    /// `[-1, 1]` must stay below [`MAX_DRIFT_FRACTION`] of the distance from the
    /// saddle to the thermal minimum.
    pub fn new(
        params: ModelParams<f64>,
        gamma_eff: f64,
        dt: f64,
        n_paths: usize,
        seed: u64,
    ) -> Result<Self> {
        let params = params.validated()?;
        if !(gamma_eff > 0.0) || !gamma_eff.is_finite() {
            return Err(invalid(
                "gamma_eff",
                format!("must be finite and > 0, got {gamma_eff}"),
            ));
        }
        if !(dt > 0.0) || !dt.is_finite() {
            return Err(invalid("dt", format!("must be finite and > 0, got {dt}")));
        }
        if n_paths == 0 {
            return Err(invalid("n_paths", "must be at least 1"));
        }
        let width = barrier(&params)?.m_min;
        let max_drift = (0..DRIFT_SCAN_POINTS)
            .map(|i| -1.0 + 2.0 * i as f64 / (DRIFT_SCAN_POINTS - 1) as f64)
            .map(|m| (gamma_eff * free_energy_derivative(m, &params)).abs())
            .fold(0.0, f64::max);
        if dt * max_drift >= MAX_DRIFT_FRACTION * width {
            return Err(invalid(
                "dt",
                format!(
                    "drift step {:.3e} exceeds {MAX_DRIFT_FRACTION} of the well half-width {width:.3e}",
                    dt * max_drift
                ),
            ));
        }
        Ok(Self {
            params,
            gamma_eff,
            dt,
            n_paths,
            seed,
        })
    }

    /// Einstein-relation diffusion constant `Gamma_eff k_B T / N`.
    pub fn diffusion(&self) -> f64 {
        self.gamma_eff * self.params.kbt() / self.params.n()
    }

    /// Independent generator for path `index`.
    pub(crate) fn rng(&self, index: usize) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(index as u64);
        rng
    }

    /// One Euler-Maruyama step at bias `h`, reflected into `[-1, 1]`.
    pub(crate) fn step(&self, m: f64, h: f64, rng: &mut ChaCha8Rng) -> f64 {
        let mut p = self.params;
        p.bias_h = h;
        let xi: f64 = StandardNormal.sample(rng);
        let next = m - self.gamma_eff * free_energy_derivative(m, &p) * self.dt
            + (2.0 * self.diffusion() * self.dt).sqrt() * xi;
        reflect(next)
    }
}

fn reflect(mut m: f64) -> f64 {
    // A single step never travels more than a fraction of the interval, but loop for safety.
    while !(-1.0..=1.0).contains(&m) {
        if m > 1.0 {
            m = 2.0 - m;
        } else {
            m = -2.0 - m;
        }
    }
    m
}

/// Sampled magnetization paths. `paths[i][k]` is path `i` at `times[k]`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LangevinEnsemble {
    pub times: Vec<f64>,
    pub paths: Vec<Vec<f64>>,
    pub seed: u64,
}

impl LangevinEnsemble {
    pub fn final_positions(&self) -> Vec<f64> {
        self.paths
            .iter()
            .filter_map(|p| p.last().copied())
            .collect()
    }
}

/// Runs `config.n_paths` independent paths from `m0` up to `t_final`,
/// keeping every `record_every`-th step (and the initial point).
pub fn simulate_langevin(
    config: &LangevinConfig,
    m0: f64,
    t_final: f64,
    record_every: usize,
) -> Result<LangevinEnsemble> {
    if !(-1.0..=1.0).contains(&m0) {
        return Err(invalid("m0", format!("must lie in [-1, 1], got {m0}")));
    }
    if !(t_final >= 0.0) || !t_final.is_finite() {
        return Err(invalid(
            "t_final",
            format!("must be finite and >= 0, got {t_final}"),
        ));
    }
    let record_every = record_every.max(1);
    let steps = (t_final / config.dt).round() as usize;
    let times: Vec<f64> = (0..=steps)
        .step_by(record_every)
        .map(|k| k as f64 * config.dt)
        .collect();
    let h = config.params.bias_h;
    let paths = (0..config.n_paths)
        .into_par_iter()
        .map(|i| {
            let mut rng = config.rng(i);
            let mut m = m0;
            let mut path = Vec::with_capacity(times.len());
            path.push(m);
            for k in 1..=steps {
                m = config.step(m, h, &mut rng);
                if k % record_every == 0 {
                    path.push(m);
                }
            }
            path
        })
        .collect();
    Ok(LangevinEnsemble {
        times,
        paths,
        seed: config.seed,
    })
}

/// Heuristic mobility scale `4 Gamma^2 / Gamma2` obtained by adiabatically
/// eliminating the transverse precession. Order-of-magnitude guidance only.
pub fn heuristic_gamma_eff(gamma_ratio: f64, gamma2: f64) -> Result<f64> {
    if !(gamma2 > 0.0) {
        return Err(invalid("gamma2", format!("must be > 0, got {gamma2}")));
    }
    Ok(4.0 * gamma_ratio * gamma_ratio / gamma2)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn desk() -> ModelParams<f64> {
        ModelParams::new(20, 0.9)
            .unwrap()
            .with_temp_nk(5.68)
            .unwrap()
    }

    #[test]
    fn seed_determinism() {
        let c = LangevinConfig::new(desk(), 1.0, 0.05, 8, 42).unwrap();
        let a = simulate_langevin(&c, -0.4, 50.0, 10).unwrap();
        let b = simulate_langevin(&c, -0.4, 50.0, 10).unwrap();
        assert_eq!(a, b);
        let c2 = LangevinConfig { seed: 43, ..c };
        assert_ne!(
            a.paths,
            simulate_langevin(&c2, -0.4, 50.0, 10).unwrap().paths
        );
    }

    #[test]
    fn einstein_relation() {
        let c = LangevinConfig::new(desk(), 2.0, 0.05, 1, 0).unwrap();
        assert_eq!(c.diffusion(), 2.0 * desk().kbt() / 20.0);
    }

    #[test]
    fn zero_temperature_descends_to_minimum() {
        let p = desk().with_temp_nk(1e-6).unwrap();
        let c = LangevinConfig::new(p, 1.0, 0.05, 4, 1).unwrap();
        let e = simulate_langevin(&c, 0.2, 500.0, 1000).unwrap();
        let m_star = (1.0f64 - 0.81).sqrt();
        for m in e.final_positions() {
            assert!((m - m_star).abs() < 1e-3, "{m}");
        }
    }

    #[test]
    fn reflection_stays_in_bounds() {
        assert_eq!(reflect(1.2), 0.8);
        assert_eq!(reflect(-1.5), -0.5);
        assert_eq!(reflect(0.3), 0.3);
    }

    #[test]
    fn rejects_coarse_steps() {
        assert!(LangevinConfig::new(desk(), 1.0, 5.0, 1, 0).is_err());
        assert!(LangevinConfig::new(desk(), 0.0, 0.05, 1, 0).is_err());
        assert!(LangevinConfig::new(desk(), 1.0, 0.05, 0, 0).is_err());
    }
}
