//! Partial character sums, Gauss sums, twisted exponential sums and the
//! certificates built on them.

mod certify;
mod gauss;
mod partial;
mod polya;
mod theta;

pub use certify::{
    certify_short_sum, certify_short_sum_steps, certify_pigeonhole, certify_truncation_onesided, certify_truncation_for,
    chain_error_term, chain_lower_bound, digest, half_log_cutoff, headline_ratio, headline_ratio_with, normalizer,
    pigeonhole_test_characters, random_coefficients, Certificate, Grade, Verdict, COEFFICIENT_SLACK,
    GRID_OVERSAMPLING, MIN_HEADLINE_MODULUS, THEOREM_RTOL,
};
pub use gauss::{gauss_sum, gauss_sum_with_budget, DEFAULT_GAUSS_BUDGET};
pub use partial::{
    compute_m, compute_m_with, modulus_key, ScanConfig, SumProfile, TracePoint, DEFAULT_BLOCK_SIZE,
    DEFAULT_M_BUDGET, MAX_TRACE_POINTS,
};
pub use polya::{polya_residual, PolyaExpansion, DEFAULT_POLYA_BUDGET};
pub use theta::{
    grid_theta_max, rational_theta_max, theta_sum_at, theta_sum_rational, Coefficients, ThetaGrid, ThetaSum,
};
