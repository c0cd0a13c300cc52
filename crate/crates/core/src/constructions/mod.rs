//! Schedules, derived bases, lemma checks and the affine maps on the
//! coefficient simplex.

mod alpha;
mod bases;
mod checks;
mod maps;

pub use alpha::{
    alpha_generate, alpha_validate, AlphaFamily, AlphaGenerator, AlphaReport, AlphaSchedule,
    ConditionCheck,
};
pub use bases::{convex_basis, interval_renorm, scaled_basis, validate_scaling};
pub use checks::{
    abel_identity_check, hj_monotonicity_check, key_lemma_check, separation_lower_bound, separation_lower_bound_with,
    small_perturbation_sum, KeyLemmaConfig, KeyLemmaMode, KeyLemmaReport, MonotonicityReport,
    PerturbationReport, SeparationReport,
};
pub use maps::{f1_index, map_build, AffineMapSpec, Entry, MapKind, MapParams, DEFAULT_F2_TERMS};
