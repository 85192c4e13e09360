//! Closed-form and low-dimensional semiclassical results: mean-field order
//! parameter and free energy, Kramers escape, instanton action and the
//! finite-size crossover, spinodal and Landau-Zener estimates, dephasing
//! scaling and the two-level / coherent multi-level `K3` formulas.

mod acf;
mod coherent;
mod dephasing;
mod free_energy;
mod freezeout;
mod goldilocks;
mod instanton;
mod kramers;
mod macrorealist;
mod mean_field;
mod spinodal;

pub use acf::{acf_linearization, AcfModes};
pub use coherent::{coherent_inputs, k3_coherent_multilevel, CoherentInputs, CoherentK3};
pub use dephasing::{
    dephasing_rates, hierarchy, hierarchy_with_threshold, k3_two_level,
    two_level_decay_coefficient, DephasingRates, HierarchyReport, HIERARCHY_LEVELS,
};
pub use free_energy::{
    barrier, free_energy, free_energy_curvature, free_energy_derivative, Barrier, CURVATURE_STEP,
};
pub use freezeout::{freezeout_exponent, FreezeoutProtocol};
pub use goldilocks::{
    gap_derivative, gap_scan, goldilocks, goldilocks_band, table_c0, GapScanRow, GoldilocksBand,
    GoldilocksRow, C0_UNCERTAINTY, TABLE_C0,
};
pub use instanton::{instanton_action, instanton_integral, InstantonAction};
pub use kramers::{kramers_time, KramersMode, KramersTime};
pub use macrorealist::{macrorealist_bound, MacrorealistBound};
pub use mean_field::{coherent_overlap, order_parameter, OrderParameter};
pub use spinodal::{
    lz_crossover_schematic, lz_error, spinodal_field, sweep_window, sweep_window_with_gap, Spinodal,
};
