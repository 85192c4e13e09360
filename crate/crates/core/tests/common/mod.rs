//! Independent oracles shared by the integration tests.
#![allow(dead_code)]

use lmglab::foil::{simulate_langevin, LangevinConfig};
use lmglab::semiclassics::{barrier, free_energy};
use lmglab::ModelParams;
use statrs::distribution::{ChiSquared, ContinuousCDF};

/// `N = n`, `Gamma/J = 0.9` at the given temperature.
pub fn params(n: usize, temp_nk: f64) -> ModelParams<f64> {
    ModelParams::new(n, 0.9)
        .unwrap()
        .with_temp_nk(temp_nk)
        .unwrap()
}

/// Temperature (nK) at which the barrier exponent equals `target`, by bisection.
pub fn temp_for_exponent(n: usize, target: f64) -> f64 {
    let (mut lo, mut hi) = (0.5, 200.0);
    for _ in 0..100 {
        let mid = 0.5 * (lo + hi);
        if barrier(&params(n, mid)).unwrap().exponent > target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// `exp(-N f(m) / k_B T)` shifted so the largest weight on [-1, 1] is O(1).
pub fn boltzmann(p: &ModelParams<f64>) -> impl Fn(f64) -> f64 + '_ {
    let f0 = free_energy(0.0, p);
    move |m| (-(free_energy(m, p) - f0) * p.n() / p.kbt()).exp()
}

/// Composite Simpson rule with `n` (even) panels.
pub fn simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, n: usize) -> f64 {
    let h = (b - a) / n as f64;
    let mut s = f(a) + f(b);
    for i in 1..n {
        s += f(a + i as f64 * h) * if i % 2 == 1 { 4.0 } else { 2.0 };
    }
    s * h / 3.0
}

/// Cumulative Boltzmann distribution on a uniform grid over [-1, 1].
pub fn boltzmann_cdf(p: &ModelParams<f64>, points: usize) -> (Vec<f64>, Vec<f64>) {
    let w = boltzmann(p);
    let xs: Vec<f64> = (0..points)
        .map(|i| -1.0 + 2.0 * i as f64 / (points - 1) as f64)
        .collect();
    let mut cdf = vec![0.0; points];
    for i in 1..points {
        cdf[i] = cdf[i - 1] + 0.5 * (w(xs[i - 1]) + w(xs[i])) * (xs[i] - xs[i - 1]);
    }
    let total = cdf[points - 1];
    cdf.iter_mut().for_each(|c| *c /= total);
    (xs, cdf)
}

/// Equilibrium samples: the positions of every path at several widely spaced times.
pub fn equilibrium_samples(
    cfg: &LangevinConfig,
    t_relax: f64,
    samples_per_path: usize,
) -> Vec<f64> {
    let every = (t_relax / cfg.dt).round() as usize;
    let total = t_relax * (samples_per_path + 2) as f64;
    let m0 = -barrier(&cfg.params).unwrap().m_min;
    let ens = simulate_langevin(cfg, m0, total, every).unwrap();
    ens.paths
        .iter()
        .flat_map(|p| p[3..].iter().copied())
        .collect()
}

/// Pearson chi-square of `samples` against the Boltzmann density on `bins`
/// equal-probability bins. Returns the statistic and its p-value.
pub fn chi_square_equiprobable(p: &ModelParams<f64>, samples: &[f64], bins: usize) -> (f64, f64) {
    let (xs, cdf) = boltzmann_cdf(p, 20001);
    let edges: Vec<f64> = (1..bins)
        .map(|k| {
            let q = k as f64 / bins as f64;
            xs[cdf.partition_point(|&c| c < q)]
        })
        .collect();
    let mut counts = vec![0usize; bins];
    for &m in samples {
        counts[edges.partition_point(|&e| e <= m)] += 1;
    }
    let expected = samples.len() as f64 / bins as f64;
    let chi2: f64 = counts
        .iter()
        .map(|&c| (c as f64 - expected).powi(2) / expected)
        .sum();
    (
        chi2,
        1.0 - ChiSquared::new((bins - 1) as f64).unwrap().cdf(chi2),
    )
}
