use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::scalar::Real;
use crate::units::{self, DEFAULT_TEMP_NK, J_PHYS};

/// Physical and dimensionless parameter bundle of the LMG model.
///
/// `gamma_ratio` is the transverse field in units of `J`; `bias_h` is the
/// longitudinal field in units of `J`. `j_phys` converts `J = 1` into rad/s
/// and is only consulted when results leave the crate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModelParams<T> {
    pub n_spins: usize,
    pub gamma_ratio: T,
    pub j_phys: T,
    pub temp_nk: T,
    pub bias_h: T,
}

impl<T: Real> ModelParams<T> {
    /// Parameters with the default `j_phys`, temperature (10 nK) and zero bias.
    pub fn new(n_spins: usize, gamma_ratio: T) -> Result<Self> {
        Self {
            n_spins,
            gamma_ratio,
            j_phys: T::lit(J_PHYS),
            temp_nk: T::lit(DEFAULT_TEMP_NK),
            bias_h: T::zero(),
        }
        .validated()
    }

    /// The reference operating point: `N = 370`, `Gamma/J = 0.95`, `T = 10 nK`.
    pub fn benchmark() -> Self {
        Self::new(370, T::lit(0.95)).expect("benchmark parameters are valid")
    }

    pub fn with_temp_nk(mut self, temp_nk: T) -> Result<Self> {
        self.temp_nk = temp_nk;
        self.validated()
    }

    pub fn with_bias(mut self, bias_h: T) -> Result<Self> {
        self.bias_h = bias_h;
        self.validated()
    }

    pub fn with_j_phys(mut self, j_phys: T) -> Result<Self> {
        self.j_phys = j_phys;
        self.validated()
    }

    pub fn with_n_spins(mut self, n_spins: usize) -> Result<Self> {
        self.n_spins = n_spins;
        self.validated()
    }

    /// Checks every invariant and returns `self` unchanged on success.
    pub fn validated(self) -> Result<Self> {
        if self.n_spins < 2 {
            return Err(invalid(
                "n_spins",
                format!("need N >= 2, got {}", self.n_spins),
            ));
        }
        if !self.gamma_ratio.is_finite() || self.gamma_ratio < T::zero() {
            return Err(invalid(
                "gamma_ratio",
                format!("must be finite and >= 0, got {}", self.gamma_ratio),
            ));
        }
        if !self.j_phys.is_finite() || self.j_phys <= T::zero() {
            return Err(invalid(
                "j_phys",
                format!("must be finite and > 0, got {}", self.j_phys),
            ));
        }
        if !self.temp_nk.is_finite() || self.temp_nk <= T::zero() {
            return Err(invalid(
                "temp_nk",
                format!("must be finite and > 0, got {}", self.temp_nk),
            ));
        }
        if !self.bias_h.is_finite() {
            return Err(invalid("bias_h", "must be finite"));
        }
        Ok(self)
    }

    pub fn n(&self) -> T {
        T::of_usize(self.n_spins)
    }

    /// `k_B T` in rad/s.
    pub fn kbt_rad_s(&self) -> T {
        units::kbt_rad_s(self.temp_nk)
    }

    /// `k_B T` in units of `J`.
    pub fn kbt(&self) -> T {
        units::kbt_dimensionless(self.temp_nk, self.j_phys)
    }

    pub fn is_ordered(&self) -> bool {
        self.gamma_ratio < T::one()
    }
}
