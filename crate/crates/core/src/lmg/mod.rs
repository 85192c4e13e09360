//! Exact diagonalization of the LMG Hamiltonian in the symmetric Dicke sector.
//!
//! `H = -(2J/N) Jz^2 - 2 Gamma Jx - 2 h Jz` on the `N + 1` states
//! `|N/2, m>`, `m = -N/2 ..= N/2`. Energies are in units of `J`.

mod hamiltonian;
mod observables;
mod spectrum;
mod susceptibility;

pub use hamiltonian::{build_hamiltonian, TridiagonalHamiltonian};
pub use observables::{eigenbasis_element, jz2_expectation, m0_weight, sign_observable};
pub use spectrum::{diagonalize, Spectrum};
pub use susceptibility::{susceptibility, SusceptibilityMode, DEFAULT_SUSCEPTIBILITY_STEP};
