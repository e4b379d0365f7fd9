//! Checks of the proven statements against computed data: per-mode lower
//! bounds, the dissipation threshold and minorant series, the positivity
//! lemma behind the fractional-dissipation bound, singularity-time fits, and
//! the auxiliary inequality probes.

pub mod bounds;
pub mod probes;
pub mod strip;

pub use bounds::{
    bound_tolerance, critical_kappa, g_func, h_func, lower_bound, minorant_partial_sum,
    minorant_term_ratio, verify_bounds, BoundReport, BoundSample,
};
pub use probes::{
    amgm_rearrangement_check, energy_ratio_probe, energy_ratio_probe_fields,
    h1_monotonicity_check, integrate_asymmetric, AmGmCheck, H1Verdict,
};
pub use strip::{
    blowup_bound, estimate_blowup_time, fit_analyticity_strip, BlowupVerdict, SingularityFit,
    StripFit, AMPLITUDE_FLOOR, TOL_FIT,
};
