//! Unit conventions.
//!
//! Internally every energy is measured in units of the Ising coupling `J`
//! (so `J = 1`) and every time in units of `1/J`. Physical angular
//! frequencies (rad/s) and rates (s^-1) only appear at the I/O boundary.

use crate::scalar::Real;

/// Default conversion from dimensionless `J = 1` units to rad/s.
pub const J_PHYS: f64 = 37195.4;

/// `k_B T` in rad/s per nanokelvin (`1310 rad/s` at `10 nK`).
pub const KBT_RAD_S_PER_NK: f64 = 131.0;

/// Default temperature in nanokelvin.
pub const DEFAULT_TEMP_NK: f64 = 10.0;

/// Thermal energy in rad/s.
pub fn kbt_rad_s<T: Real>(temp_nk: T) -> T {
    T::lit(KBT_RAD_S_PER_NK) * temp_nk
}

/// Thermal energy in units of `J`.
pub fn kbt_dimensionless<T: Real>(temp_nk: T, j_phys: T) -> T {
    kbt_rad_s(temp_nk) / j_phys
}

/// Temperature (nK) giving a dimensionless `k_B T`.
pub fn temp_nk_for_kbt<T: Real>(kbt: T, j_phys: T) -> T {
    kbt * j_phys / T::lit(KBT_RAD_S_PER_NK)
}
