use serde::Serialize;

use crate::scalar::Real;

/// Zero-temperature mean-field magnetization.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OrderParameter<T> {
    /// `sqrt(1 - (Gamma/J)^2)`, or `0` outside the ordered phase.
    pub m_star: T,
    /// `false` when `Gamma/J > 1`.
    pub ordered: bool,
}

/// `m* = sqrt(1 - (Gamma/J)^2)`.
pub fn order_parameter<T: Real>(gamma_ratio: T) -> OrderParameter<T> {
    let g = gamma_ratio.abs();
    if g > T::one() {
        OrderParameter {
            m_star: T::zero(),
            ordered: false,
        }
    } else {
        OrderParameter {
            m_star: (T::one() - g * g).sqrt(),
            ordered: true,
        }
    }
}

/// Overlap `(Gamma/J)^N` of the two mean-field coherent states, evaluated in log space.
pub fn coherent_overlap<T: Real>(n_spins: usize, gamma_ratio: T) -> T {
    (T::of_usize(n_spins) * gamma_ratio.ln()).exp()
}
