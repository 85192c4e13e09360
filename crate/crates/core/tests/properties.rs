//! Invariants of the open-system machinery under randomized inputs.

use num_complex::Complex;
use proptest::prelude::*;

use lmglab::linalg::{CMatrix, Matrix};
use lmglab::lmg::{build_hamiltonian, diagonalize, sign_observable, Spectrum};
use lmglab::open_system::{
    build_superoperator, k3_stationary, propagate, truncate, DensityOperator,
};
use lmglab::semiclassics::{coherent_inputs, k3_coherent_multilevel};
use lmglab::ModelParams;

fn spectrum(n: usize, gamma: f64) -> Spectrum<f64> {
    diagonalize(&build_hamiltonian(&ModelParams::new(n, gamma).unwrap()).unwrap()).unwrap()
}

/// `(A A^dagger + I/10) / Tr(...)` for an arbitrary complex `A`.
fn density_from(entries: &[(f64, f64)], n: usize) -> CMatrix<f64> {
    let a = Matrix::from_fn(n, n, |i, j| {
        Complex::new(entries[i * n + j].0, entries[i * n + j].1)
    });
    let mut rho = Matrix::from_fn(n, n, |i, j| {
        let shift = if i == j { 0.1 } else { 0.0 };
        (0..n)
            .map(|k| a[(i, k)] * a[(j, k)].conj())
            .sum::<Complex<f64>>()
            + shift
    });
    let tr: f64 = (0..n).map(|i| rho[(i, i)].re).sum();
    for i in 0..n {
        for j in 0..n {
            rho[(i, j)] /= tr;
        }
    }
    rho
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn propagation_preserves_trace_and_hermiticity(
        n_spins in 20usize..60,
        gamma_ratio in 0.8f64..0.98,
        levels in 2usize..=6,
        rate in 0.0f64..2.0,
        time in 0.1f64..30.0,
        entries in prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 36),
    ) {
        let spec = spectrum(n_spins, gamma_ratio);
        let sys = truncate(&spec, &sign_observable(n_spins), levels).unwrap();
        let l = build_superoperator(&sys, sys.dimensionless_rate(rate * 1000.0)).unwrap();
        let rho = DensityOperator::new(density_from(&entries, levels)).unwrap();
        let out = propagate(&l, &rho, time / sys.delta_e).unwrap();
        prop_assert!((out.trace() - 1.0).norm() < 1e-10);
        let m = out.matrix();
        for i in 0..levels {
            for j in 0..levels {
                prop_assert!((m[(i, j)] - m[(j, i)].conj()).norm() < 1e-12);
            }
        }
        prop_assert!(out.purity() <= 1.0 + 1e-10);
    }

    #[test]
    fn k3_is_gauge_invariant(flips in prop::collection::vec(any::<bool>(), 6), gamma_phi in 0.0f64..1.0) {
        let spec = spectrum(60, 0.9);
        let q = sign_observable(60);
        let k3 = |s: &Spectrum<f64>| k3_stationary(&truncate(s, &q, 6).unwrap(), gamma_phi, None).unwrap();
        let mut flipped = spec.clone();
        for (k, _) in flips.iter().enumerate().filter(|(_, &f)| f) {
            for r in 0..flipped.dim() {
                flipped.eigenvectors[(r, k)] = -flipped.eigenvectors[(r, k)];
            }
        }
        prop_assert!((k3(&spec) - k3(&flipped)).abs() < 1e-12);
    }

    #[test]
    fn coherent_doublet_matches_undamped_two_level_dynamics(n_spins in 10usize..80, gamma_ratio in 0.8f64..0.97) {
        let spec = spectrum(n_spins, gamma_ratio);
        let q = sign_observable(n_spins);
        let inputs = coherent_inputs(&spec, &q, 2).unwrap();
        prop_assert_eq!(&inputs.levels, &vec![1]);
        let coherent = k3_coherent_multilevel(&inputs.q_k0_sq, &inputs.gap_ratios, 1.0).unwrap().k3;
        prop_assert!((coherent - 1.5 * inputs.q_k0_sq[0]).abs() < 1e-12);
        let gksl = k3_stationary(&truncate(&spec, &q, 2).unwrap(), 0.0, None).unwrap();
        prop_assert!((coherent - gksl).abs() < 1e-10, "{} vs {}", coherent, gksl);
    }
}
