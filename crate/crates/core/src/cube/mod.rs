//! Discretised GNS quotient on the unit cube `[0,1]^d`, `d ≤ 3`.
//!
//! Functions live on a cell-centred grid. The gradient energy uses forward
//! differences across interior faces only, so the grid Laplacian is the
//! Neumann one and is diagonalised by the cosine transform used for the
//! spectral projectors.

mod experiments;
mod grid;
mod minimize;
mod quotient;
mod rearrange;
mod spectral;

pub use experiments::{
    concentration_experiment, concentration_experiment_with, corner_gaussian, random_bumps,
    random_zero_mean, rearrange_check, RANDOM_MODE_CUTOFF, scaling_resolution, upper_bound_scaling,
    upper_bound_scaling_with, ConcentrationRow, ConcentrationSettings, RearrangeSummary, ScalingRow,
};
pub use grid::{CubeGrid, GridFunction, MAX_CELLS};
pub use minimize::{minimize, MinimizeResult};
pub use quotient::{dirichlet_energy, power_exponent, quotient, QuotientBreakdown};
pub use rearrange::{
    corner_order, discrete_perimeter, perimeter_threshold_check, rearrange_corner, PerimeterCheck,
    RearrangeConfig,
};
pub use spectral::{
    cosine_coefficients, discrete_mode_energy, from_cosine_coefficients, heat_smooth, mode_energy,
    neumann_project, projector_bound, ProjectorBound,
};
