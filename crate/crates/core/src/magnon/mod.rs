//! Closed-form free-magnon quantities: Dirichlet modes, free-boson sums and
//! integrals, the continuum constants, Wick occupations, the explicit error
//! formulas and the assembled finite-temperature envelopes.

mod constants;
mod envelope;
mod modes;
mod sums;

pub use constants::{continuum_constants, zeta_3_2, AsymptoticConstants, C1, C2};
pub use envelope::{
    cutoff_energy, leading_term, lower_envelope, lower_envelope_at, lower_ell_choice, upper_ell_choice, upper_envelope,
    upper_envelope_at, E0Source, EnvelopeConfig, EnvelopeKind, ErrorEnvelope,
};
pub use modes::{dirichlet_modes, eps, ln_one_minus_exp_neg, DirichletModeSet, ModeFamily};
pub use sums::{
    free_boson_integral, free_boson_integral_from, free_boson_log_partition, free_boson_mean_energy, free_boson_sum,
    lemma53_bound, lemma53_split_bound, lemma_entropy_error, lemma_trace_ratio_bound, log_integral, missing_mode_term,
    wick_occupation, WickOccupation,
};
