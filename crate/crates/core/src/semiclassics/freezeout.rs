use num_rational::Ratio;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FreezeoutProtocol {
    /// Quench of the coupling through the quantum critical point.
    JQuench,
    /// Longitudinal-field sweep through the first-order line.
    HQuench,
    /// Classical overdamped (Model A) dynamics.
    ClassicalOverdamped,
}

impl FreezeoutProtocol {
    /// `nu z` of the gap closing `Delta ~ |epsilon|^{nu z}` along the sweep.
    pub fn gap_exponent(self) -> Ratio<i64> {
        match self {
            Self::JQuench => Ratio::new(1, 2),
            Self::HQuench | Self::ClassicalOverdamped => Ratio::from_integer(1),
        }
    }
}

/// Kibble-Zurek freeze-out exponent `nu z / (1 + nu z)`.
pub fn freezeout_exponent(protocol: FreezeoutProtocol) -> Ratio<i64> {
    let mu = protocol.gap_exponent();
    mu / (Ratio::from_integer(1) + mu)
}
