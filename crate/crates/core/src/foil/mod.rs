//! Classical comparison dynamics on the mean-field landscape.
//!
//! [`integrate_bloch`] evolves the conservative precession equations;
//! the Langevin tools sample overdamped Model-A dynamics
//! `dm = -Gamma_eff f'(m) dt + sqrt(2 D dt) xi` with `D = Gamma_eff k_B T / N`,
//! time measured in `1/J`.

mod bloch;
mod langevin;
mod mfpt;

pub use bloch::{
    integrate_bloch, zero_crossing_frequency, BlochState, BlochTrajectory, MAX_BLOCH_DT,
};
pub use langevin::{
    heuristic_gamma_eff, simulate_langevin, LangevinConfig, LangevinEnsemble, DEFAULT_GAMMA_EFF,
    MAX_DRIFT_FRACTION,
};
pub use mfpt::{
    classical_p_error, mfpt_estimate, ClassicalSweep, MfptEstimate, FROZEN_FRACTION,
    MAX_DESK_EXPONENT, MIN_PASSAGES,
};
