//! Truncated-level open-system dynamics under collective `Jz` dephasing.
//!
//! Density operators are vectorized by stacking columns: element `(i, j)` of
//! an `n x n` operator sits at index `i + j n`. Under this convention
//! `vec(A X B) = (B^T ⊗ A) vec(X)`, so the generator of
//!
//! ```text
//! d rho/dt = -i [H, rho] + gamma (Jz rho Jz - 1/2 {Jz^2, rho})
//! ```
//!
//! is `-i (I ⊗ H - H^T ⊗ I) + gamma (Jz^T ⊗ Jz - 1/2 I ⊗ Jz^2 - 1/2 (Jz^2)^T ⊗ I)`.
//!
//! Rates enter the public API in s^-1 and are divided by `j_phys` once,
//! when a [`LevelSystem`] is consumed.

mod density;
mod k3;
mod level_system;
mod superoperator;

pub use density::{lueders_instrument, DensityOperator};
pub use k3::{
    default_dt, k3_sequential, k3_stationary, k3_stationary_from, k3_stationary_record, t2_phys,
    threshold_gamma, threshold_gamma_in, K3Record, DEFAULT_THRESHOLD_BRACKET, THRESHOLD_TOLERANCE,
    THRESHOLD_WIDEN_LIMITS,
};
pub use level_system::{truncate, LevelSystem, MAX_LEVELS};
pub use superoperator::{build_superoperator, propagate, Propagator, Superoperator};
