//! Built-in consistency checks: the reference self-tests of the original
//! listing plus invariant checks on the benchmark system.

use num_complex::Complex;
use serde::Serialize;

use crate::error::Result;
use crate::foil::{simulate_langevin, LangevinConfig};
use crate::linalg::{CMatrix, Matrix};
use crate::lmg::{build_hamiltonian, diagonalize, eigenbasis_element, sign_observable, Spectrum};
use crate::open_system::{
    build_superoperator, k3_stationary, k3_stationary_from, propagate, truncate, DensityOperator,
    Superoperator,
};
use crate::params::ModelParams;
use crate::semiclassics::{
    coherent_inputs, instanton_action, k3_coherent_multilevel, macrorealist_bound,
};

/// Outcome of one named check.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

impl Check {
    fn from_bound(name: &'static str, value: f64, bound: f64) -> Self {
        Self {
            name,
            passed: value.is_finite() && value <= bound,
            detail: format!("{value:.3e} <= {bound:.1e}"),
        }
    }

    fn from_result(name: &'static str, r: Result<Check>) -> Self {
        r.unwrap_or_else(|e| Self {
            name,
            passed: false,
            detail: e.to_string(),
        })
    }
}

/// Runs every check; never panics.
pub fn run_selftests() -> Vec<Check> {
    let mut out = vec![
        Check::from_result("n2_eigenvalues", n2_eigenvalues()),
        Check::from_result("dephasing_decay", dephasing_decay()),
        Check::from_result("trace_preservation", trace_preservation()),
        Check::from_result("superoperator_semigroup", semigroup()),
        Check::from_result("macrorealist_bound", Ok(macrorealist())),
        Check::from_result("instanton_cross_check", instanton_grid()),
        Check::from_result("langevin_seed_determinism", langevin_determinism()),
    ];
    let bench = ModelParams::<f64>::benchmark();
    match build_hamiltonian(&bench).and_then(|h| diagonalize(&h)) {
        Ok(spec) => {
            out.push(Check::from_result("parity_zeros", parity_zeros(&spec)));
            out.push(Check::from_result(
                "orthonormality",
                Ok(orthonormality(&spec)),
            ));
            out.push(Check::from_result(
                "gauge_invariance",
                gauge_invariance(&spec),
            ));
            out.push(Check::from_result(
                "thermal_mixture_immunity",
                thermal_immunity(&spec),
            ));
            out.push(Check::from_result(
                "hermiticity_preservation",
                hermiticity(&spec),
            ));
            out.push(Check::from_result(
                "coherent_ceiling",
                coherent_ceiling(&spec),
            ));
        }
        Err(e) => out.push(Check {
            name: "benchmark_spectrum",
            passed: false,
            detail: e.to_string(),
        }),
    }
    out
}

fn three_level_generator() -> Superoperator<f64> {
    let jz = Matrix::from_diagonal(&[-1.0, 0.0, 1.0]);
    Superoperator::from_parts(&Matrix::zeros(3, 3), &jz, &jz.matmul(&jz), 0.1)
}

fn n2_eigenvalues() -> Result<Check> {
    let s = diagonalize(&build_hamiltonian(&ModelParams::<f64>::new(2, 0.5)?)?)?;
    let r5 = 5f64.sqrt();
    let expected = [(-1.0 - r5) / 2.0, -1.0, (-1.0 + r5) / 2.0];
    let err = s
        .eigenvalues
        .iter()
        .zip(expected)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);
    Ok(Check::from_bound("n2_eigenvalues", err, 1e-10))
}

fn dephasing_decay() -> Result<Check> {
    let p = three_level_generator().propagator(2.0)?;
    let mut x = CMatrix::zeros(3, 3);
    x[(0, 2)] = Complex::new(1.0, 0.0);
    let y = p.apply(&x)?;
    Ok(Check::from_bound(
        "dephasing_decay",
        (y[(0, 2)].re - (-0.4f64).exp()).abs(),
        1e-8,
    ))
}

fn trace_preservation() -> Result<Check> {
    let rho = DensityOperator::diagonal(&[0.2, 0.3, 0.5])?;
    let out = propagate(&three_level_generator(), &rho, 2.0)?;
    Ok(Check::from_bound(
        "trace_preservation",
        (out.trace().re - 1.0).abs(),
        1e-10,
    ))
}

fn semigroup() -> Result<Check> {
    let l = three_level_generator();
    let mut m = CMatrix::from_diagonal(&[
        Complex::new(0.5, 0.0),
        Complex::new(0.25, 0.0),
        Complex::new(0.25, 0.0),
    ]);
    m[(0, 1)] = Complex::new(0.1, 0.2);
    m[(1, 0)] = Complex::new(0.1, -0.2);
    let rho = DensityOperator::new(m)?;
    let two_step = propagate(&l, &propagate(&l, &rho, 0.7)?, 1.3)?;
    let one_step = propagate(&l, &rho, 2.0)?;
    let diff = (two_step.matrix() - one_step.matrix()).norm1();
    Ok(Check::from_bound("superoperator_semigroup", diff, 1e-8))
}

fn macrorealist() -> Check {
    let b = macrorealist_bound();
    Check {
        name: "macrorealist_bound",
        passed: b.max_k3 == 1 && b.min_k3 == -3,
        detail: format!("max {} min {}", b.max_k3, b.min_k3),
    }
}

fn instanton_grid() -> Result<Check> {
    let mut worst = 0.0f64;
    for i in 0..50 {
        let g = 0.5 + (0.995 - 0.5) * i as f64 / 49.0;
        let a = instanton_action(g)?;
        worst = worst.max((a.closed_form - a.numeric).abs());
    }
    Ok(Check::from_bound("instanton_cross_check", worst, 1e-8))
}

fn langevin_determinism() -> Result<Check> {
    let p = ModelParams::<f64>::new(20, 0.9)?.with_temp_nk(5.68)?;
    let c = LangevinConfig::new(p, 1.0, 0.05, 4, 2024)?;
    let a = simulate_langevin(&c, -0.4, 20.0, 50)?;
    let b = simulate_langevin(&c, -0.4, 20.0, 50)?;
    Ok(Check {
        name: "langevin_seed_determinism",
        passed: a == b,
        detail: format!("seed {}", c.seed),
    })
}

fn parity_zeros(spec: &Spectrum<f64>) -> Result<Check> {
    let q = sign_observable(370);
    let mut worst = 0.0f64;
    for i in 0..10 {
        worst = worst.max(eigenbasis_element(spec, &spec.m_grid, i, i)?.abs());
    }
    for k in [0, 2, 4] {
        worst = worst.max(eigenbasis_element(spec, &q, k, 0)?.abs());
    }
    worst = worst.max(eigenbasis_element(spec, &q, 1, 1)?.abs());
    Ok(Check::from_bound("parity_zeros", worst, 1e-8))
}

fn orthonormality(spec: &Spectrum<f64>) -> Check {
    let v = &spec.eigenvectors;
    let g = v.transpose().matmul(v);
    let d = (&g - &Matrix::identity(spec.dim())).max_abs();
    Check::from_bound("orthonormality", d, 1e-9)
}

fn gauge_invariance(spec: &Spectrum<f64>) -> Result<Check> {
    let q = sign_observable(370);
    let base = truncate(spec, &q, 5)?;
    let k_base = k3_stationary(&base, 0.05, None)?;
    let mut flipped = spec.clone();
    for col in [0, 1, 3] {
        for r in 0..flipped.dim() {
            flipped.eigenvectors[(r, col)] = -flipped.eigenvectors[(r, col)];
        }
    }
    let sys = truncate(&flipped, &q, 5)?;
    let k = k3_stationary(&sys, 0.05, None)?;
    let dq = (sys.q[(0, 1)].powi(2) - base.q[(0, 1)].powi(2)).abs();
    Ok(Check::from_bound(
        "gauge_invariance",
        (k - k_base).abs().max(dq),
        1e-10,
    ))
}

fn thermal_immunity(spec: &Spectrum<f64>) -> Result<Check> {
    let sys = truncate(spec, &sign_observable(370), 5)?;
    let inst = sys.doublet_q();
    let mut values = Vec::new();
    for p in [0.0, 0.25, 0.731, 1.0] {
        let rho = DensityOperator::doublet_mixture(5, p)?;
        values.push(k3_stationary_from(&sys, &rho, &inst, 0.05, None)?.k3);
    }
    let spread = values.iter().fold(f64::MIN, |a, &b| a.max(b))
        - values.iter().fold(f64::MAX, |a, &b| a.min(b));
    Ok(Check::from_bound("thermal_mixture_immunity", spread, 1e-6))
}

fn hermiticity(spec: &Spectrum<f64>) -> Result<Check> {
    let sys = truncate(spec, &sign_observable(370), 5)?;
    let l = build_superoperator(&sys, 0.3 / sys.j_phys)?;
    let p = l.propagator(7.0)?;
    let mut m = CMatrix::zeros(5, 5);
    for i in 0..5 {
        for j in 0..5 {
            m[(i, j)] = if i == j {
                Complex::new(0.2, 0.0)
            } else {
                Complex::new(0.01 * (i + j) as f64, 0.005 * (i as f64 - j as f64))
            };
        }
    }
    let raw = crate::linalg::CMatrix::unvec_columns(&p.matrix().matvec(&m.vec_columns()), 5)?;
    Ok(Check::from_bound(
        "hermiticity_preservation",
        raw.hermiticity_defect(),
        1e-9,
    ))
}

fn coherent_ceiling(spec: &Spectrum<f64>) -> Result<Check> {
    let q = sign_observable(370);
    let sys = truncate(spec, &q, 5)?;
    let numeric = k3_stationary(&sys, 1e-6, None)?;
    let inputs = coherent_inputs(spec, &q, 5)?;
    let analytic = k3_coherent_multilevel(&inputs.q_k0_sq, &inputs.gap_ratios, 1.0)?.k3;
    Ok(Check::from_bound(
        "coherent_ceiling",
        ((numeric - analytic) / analytic).abs(),
        3e-3,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_check_passes() {
        let checks = run_selftests();
        for c in &checks {
            assert!(c.passed, "{}: {}", c.name, c.detail);
        }
        assert!(checks.len() >= 13);
    }
}
