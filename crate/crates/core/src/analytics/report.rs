use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use super::estimators::{
    beta_hat_ln, default_windows, gamma_hat, ln_normaliser, markoff_sigma, mu_hat, running_estimates, ExponentRecord,
    MarkoffSigma, RunningEstimates,
};
use crate::error::{Error, Result};
use crate::lattice::{records, shortest_vector, DiscreteSetProvider, LatticeProvider, RecordTable, Transform};
use crate::splitspace::{split_norm, SplitShape};

/// `α_1 = 1 / min split norm` of `transform(set)`.
pub fn alpha1<P: DiscreteSetProvider + ?Sized>(provider: &P, transform: Option<&Transform>) -> Result<f64> {
    Ok(1.0 / split_norm(&shortest_vector(provider, transform)?)?)
}

/// Residuals of the main identities.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct IdentityResiduals {
    /// `|β̂ - n/d - γ̂|`
    pub beta_gamma: f64,
    /// `|β̂ - (1 - 1/μ̂)|`
    pub beta_mu: f64,
    /// `|σ̂ - ĉ̃^{-m/d}|`; `None` when `σ = ∞`.
    pub sigma_markoff: Option<f64>,
}

/// Everything the estimators say about one record table.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExcursionReport {
    pub shape: SplitShape,
    pub record_count: usize,
    pub certified: bool,
    /// `R`: records are complete up to `||p_2|| <= R`.
    pub radius: f64,
    /// `ln S` for the `β` window.
    pub ln_shear_budget: f64,
    /// `T` for the `γ` window.
    pub time_budget: f64,
    pub mu_hat: f64,
    pub beta_hat: f64,
    pub gamma_hat: f64,
    pub markoff_hat: f64,
    pub sigma_hat: Option<f64>,
    /// `ln C0` used to normalise `||p_1||`.
    pub ln_normaliser: f64,
    pub running: Option<RunningEstimates>,
    pub residuals: IdentityResiduals,
    /// `ĉ̃^m a_m a_n <= 2^d` (homogeneous lattices only).
    pub minkowski_consistent: Option<bool>,
    pub tolerance: f64,
    pub pass: bool,
    pub exponent_records: Vec<ExponentRecord>,
}

impl ExcursionReport {
    /// Builds the report from a table with default windows.
    pub fn from_table(table: &RecordTable, tolerance: f64) -> Result<Self> {
        let (r, ln_s, t) = default_windows(table)?;
        Self::with_windows(table, r, ln_s, t, tolerance)
    }

    pub fn with_windows(table: &RecordTable, r: f64, ln_s: f64, t: f64, tolerance: f64) -> Result<Self> {
        let shape = table.shape;
        let (m, n, d) = (shape.m as f64, shape.n as f64, shape.d() as f64);
        let (mu, exponent_records) = mu_hat(table, r)?;
        let beta = beta_hat_ln(table, ln_s)?;
        let gamma = gamma_hat(table, t)?;
        let MarkoffSigma { c_tilde, sigma } = markoff_sigma(table)?;
        let residuals = IdentityResiduals {
            beta_gamma: (beta - n / d - gamma).abs(),
            beta_mu: (beta - (1.0 - 1.0 / mu)).abs(),
            sigma_markoff: sigma.map(|s| (s - c_tilde.powf(-m / d)).abs()),
        };
        let pass = residuals.beta_gamma <= tolerance
            && residuals.beta_mu <= tolerance
            && residuals.sigma_markoff.is_none_or(|x| x <= tolerance);
        Ok(ExcursionReport {
            shape,
            record_count: table.len(),
            certified: table.is_certified(),
            radius: r,
            ln_shear_budget: ln_s,
            time_budget: t,
            mu_hat: mu,
            beta_hat: beta,
            gamma_hat: gamma,
            markoff_hat: c_tilde,
            sigma_hat: sigma,
            ln_normaliser: ln_normaliser(table),
            running: running_estimates(table),
            residuals,
            minkowski_consistent: None,
            tolerance,
            pass,
            exponent_records,
        })
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    /// Two-column `quantity,value` CSV.
    pub fn to_csv(&self) -> String {
        let opt = |x: Option<f64>| x.map_or_else(|| "inf".to_string(), |v| format!("{v:.12e}"));
        let mut out = String::from("quantity,value\n");
        let rows: Vec<(&str, String)> = vec![
            ("m", self.shape.m.to_string()),
            ("n", self.shape.n.to_string()),
            ("radius", format!("{:.12e}", self.radius)),
            ("ln_shear_budget", format!("{:.12e}", self.ln_shear_budget)),
            ("time_budget", format!("{:.12e}", self.time_budget)),
            ("mu_hat", format!("{:.12e}", self.mu_hat)),
            ("beta_hat", format!("{:.12e}", self.beta_hat)),
            ("gamma_hat", format!("{:.12e}", self.gamma_hat)),
            ("markoff_hat", format!("{:.12e}", self.markoff_hat)),
            ("sigma_hat", opt(self.sigma_hat)),
            ("residual_beta_gamma", format!("{:.12e}", self.residuals.beta_gamma)),
            ("residual_beta_mu", format!("{:.12e}", self.residuals.beta_mu)),
            ("residual_sigma_markoff", opt(self.residuals.sigma_markoff)),
            ("certified", self.certified.to_string()),
            ("pass", self.pass.to_string()),
        ];
        for (k, v) in rows {
            let _ = writeln!(out, "{k},{v}");
        }
        out
    }
}

/// Search budget for [`verify_axiomatic`].
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Budget {
    pub r_max: f64,
    pub tolerance: f64,
}

impl Default for Budget {
    fn default() -> Self {
        Budget { r_max: 1e6, tolerance: 0.05 }
    }
}

/// Records, every estimator and the identity residuals for a lattice.
pub fn verify_axiomatic(provider: &LatticeProvider, budget: Budget) -> Result<ExcursionReport> {
    let table = match records(provider, budget.r_max) {
        Err(Error::VerticalVector) => return Err(Error::VerticalVector),
        other => other?,
    };
    let mut report = ExcursionReport::from_table(&table, budget.tolerance)?;
    if !provider.is_affine() {
        let shape = provider.shape();
        let a = crate::lattice::unit_ball_volume(shape.m) * crate::lattice::unit_ball_volume(shape.n);
        let bound = 2f64.powi(shape.d() as i32);
        report.minkowski_consistent = Some(report.markoff_hat.powi(shape.m as i32) * a <= bound * (1.0 + 1e-9));
    }
    Ok(report)
}

/// Sampled `max ln α_1(h_s x) / ln |s|` over `|s| <= s_max` for a planar
/// lattice: a finite-`s` read of `β` from above the optimal-shear bound.
pub fn beta_sampled(provider: &LatticeProvider, s_max: f64, samples: usize) -> Result<f64> {
    use crate::arithmetic::rat_from_f64;
    use crate::splitspace::ShearMatrix;
    if provider.shape() != SplitShape::planar() {
        return Err(Error::InvalidArgument("sampled beta is implemented for m = n = 1".into()));
    }
    let lo = s_max.ln() / 4.0;
    let hi = s_max.ln();
    let mut best = f64::NEG_INFINITY;
    for k in 0..samples.max(2) {
        let ln_s = lo + (hi - lo) * k as f64 / (samples.max(2) - 1) as f64;
        for sign in [1.0, -1.0] {
            let h = Transform::shear(&ShearMatrix::scalar(rat_from_f64(sign * ln_s.exp())));
            let a = alpha1(provider, Some(&h))?;
            best = best.max(a.ln() / ln_s);
        }
    }
    Ok(best)
}
