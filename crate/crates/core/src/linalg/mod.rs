//! Dense linear algebra used by the spectral and open-system modules.

mod dense;
mod expm;
mod tridiag;

pub use dense::{CMatrix, Matrix};
pub use expm::expm;
pub use tridiag::{tridiagonal_eigen, TridiagonalEigen};
