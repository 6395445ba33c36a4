//! Estimators for `α_1`, `β`, `γ`, `μ`, the Markoff constant `c̃` and `σ`,
//! their one-sided variants, and the identity checks tying them together.

mod estimators;
mod report;

pub use estimators::{
    beta_hat, default_shear_budget, default_windows, gamma_hat, ln_normaliser, markoff_sigma, mu_hat, one_sided,
    record_logs, running_estimates, running_series, side_of, ExponentRecord, MarkoffSigma, OneSided, RecordLogs,
    RunningEstimates, Side, MARKOFF_ZERO, MIN_DENOMINATOR,
};
pub use report::{alpha1, beta_sampled, verify_axiomatic, Budget, ExcursionReport, IdentityResiduals};
pub(crate) use estimators::beta_hat_ln;
