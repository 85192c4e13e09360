//! Numerical laboratory for the Lipkin-Meshkov-Glick collective-spin model.
//!
//! The crate is organised in layers:
//!
//! * [`lmg`]: exact diagonalization in the symmetric Dicke sector.
//! * [`open_system`]: truncated-level GKSL dynamics under collective dephasing
//!   and the three-time Leggett-Garg correlator `K3`.
//! * [`semiclassics`]: mean-field free energy, Kramers escape, instanton action,
//!   finite-size crossover and related closed forms.
//! * [`foil`]: the classical Bloch / Langevin comparison model.
//!
//! Energies are in units of `J` and times in units of `1/J`; `j_phys` converts
//! to rad/s at the boundary. Numerical kernels are generic over [`Real`]
//! (`f32` or `f64`); the `*64` aliases below fix double precision.

// `!(x > 0)` is used deliberately so that NaN inputs are rejected.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod foil;
pub mod linalg;
pub mod lmg;
pub mod open_system;
pub mod params;
pub mod quad;
pub mod roots;
pub mod scalar;
pub mod selftest;
pub mod semiclassics;
pub mod units;

pub use error::{Error, Result};
pub use params::ModelParams;
pub use scalar::Real;

pub type ModelParams64 = ModelParams<f64>;
pub type ModelParams32 = ModelParams<f32>;
pub type Spectrum64 = lmg::Spectrum<f64>;
pub type Spectrum32 = lmg::Spectrum<f32>;
pub type Hamiltonian64 = lmg::TridiagonalHamiltonian<f64>;
pub type LevelSystem64 = open_system::LevelSystem<f64>;
pub type DensityOperator64 = open_system::DensityOperator<f64>;
pub type Superoperator64 = open_system::Superoperator<f64>;
