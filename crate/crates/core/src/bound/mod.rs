//! Operator-inequality and state-level certificates on small systems, and the
//! constants of the lower-bound budget.

mod budget;
mod coordinate;
mod psd;
mod suite;
mod truncation;

pub use budget::{budget_delta, compute_budget, ell0, LowerBoundBudget};
pub use coordinate::{
    apply_v, build_coordinate_map_v, neumann_laplacian, two_particle_density, v_matrix, verify_density_bounds,
    verify_halfspin_quadratic_form_equality, verify_laplacian_lower_bound, verify_vnorm_lower_bound, CoordinateMap,
    CoordinateState, DensityReport, TwoParticleDensity,
};
pub use psd::{psd_certificate, verify_casimir_lower_bound, verify_php_leq_t, CasimirReport, PSD_DIM_CAP};
pub use suite::{density_suite, DensitySuite, StateKind};
pub use truncation::{verify_low_energy_truncation, TruncationReport};
