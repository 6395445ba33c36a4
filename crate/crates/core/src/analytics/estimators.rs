use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::{Record, RecordTable};

/// Records with `||p_2||` below this are left out of every window.
pub const MIN_DENOMINATOR: f64 = 16.0;

/// Bounds for the Markoff-product normaliser.
const NORMALISER_RANGE: (f64, f64) = (1.0 / 16.0, 4.0);

/// Per-record log data after normalisation.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RecordLogs {
    pub ln_x: f64,
    pub ln_y: f64,
    /// `ln x - ln C0`.
    pub ln_x_norm: f64,
}

impl RecordLogs {
    /// `e = 1 - ln x' / ln y`.
    pub fn exponent(&self) -> f64 {
        1.0 - self.ln_x_norm / self.ln_y
    }

    /// `ln s*` with `s* = y / x`.
    pub fn ln_s_star(&self) -> f64 {
        self.ln_y - self.ln_x
    }

    /// Optimal time `t* = ln(y / x)`, same as `ln s*`.
    pub fn t_star(&self) -> f64 {
        self.ln_y - self.ln_x
    }

    /// `-ln(residual) / ln s*` on normalised logs; equals `1 - 1/e`.
    pub fn beta_contribution(&self) -> f64 {
        -self.ln_x_norm / (self.ln_y - self.ln_x_norm)
    }

    /// `-ln(min norm) / t*` on normalised logs; equals `m/d - 1/e`.
    pub fn gamma_contribution(&self, m: usize, n: usize) -> f64 {
        let d = (m + n) as f64;
        -((m as f64) * self.ln_x_norm + (n as f64) * self.ln_y) / d / (self.ln_y - self.ln_x_norm)
    }
}

fn eligible(r: &Record) -> bool {
    r.y() >= MIN_DENOMINATOR && !r.vector.is_vertical()
}

fn ln_markoff(r: &Record) -> f64 {
    let s = r.vector.shape();
    r.ln_x() + s.n as f64 / s.m as f64 * r.ln_y()
}

/// Indices of the records with `||p_2|| ∈ [R^{1/2}, R]`. When a large partial quotient
/// leaves that range empty, the record still active across it (the last one below
/// `R^{1/2}`) stands in.
fn mu_window_ids(table: &RecordTable, r: f64) -> Vec<usize> {
    let lo = r.sqrt().max(MIN_DENOMINATOR);
    let eligible_ids = || table.records.iter().enumerate().filter(|(_, rec)| eligible(rec));
    let inside: Vec<usize> = eligible_ids().filter(|(_, rec)| rec.y() >= lo && rec.y() <= r).map(|(i, _)| i).collect();
    if !inside.is_empty() {
        return inside;
    }
    let active = table.records.iter().enumerate().filter(|(_, rec)| rec.y() > 1.0 && rec.y() < lo && !rec.vector.is_vertical());
    active.map(|(i, _)| i).next_back().into_iter().collect()
}

fn mu_window(table: &RecordTable, r: f64) -> impl Iterator<Item = &Record> {
    mu_window_ids(table, r).into_iter().map(|i| &table.records[i])
}

/// `ln C0`: the median log Markoff product over the `μ` window at the table
/// radius, clamped to a fixed range. Subtracting it removes the O(1)
/// constant that otherwise biases `ln x / ln y` by `O(1 / ln R)`.
pub fn ln_normaliser(table: &RecordTable) -> f64 {
    let mut logs: Vec<f64> = mu_window(table, table.radius_reached).map(ln_markoff).collect();
    if logs.is_empty() {
        logs = table.records.iter().filter(|r| eligible(r)).map(ln_markoff).collect();
    }
    if logs.is_empty() {
        return 0.0;
    }
    logs.sort_by(|a, b| a.total_cmp(b));
    let k = logs.len();
    let med = if k % 2 == 1 { logs[k / 2] } else { 0.5 * (logs[k / 2 - 1] + logs[k / 2]) };
    med.clamp(NORMALISER_RANGE.0.ln(), NORMALISER_RANGE.1.ln())
}

pub fn record_logs(table: &RecordTable, ln_c0: f64) -> Vec<(usize, RecordLogs)> {
    table
        .records
        .iter()
        .enumerate()
        .filter(|(_, r)| eligible(r))
        .map(|(i, r)| (i, logs_of(r, ln_c0)))
        .collect()
}

fn logs_of(r: &Record, ln_c0: f64) -> RecordLogs {
    RecordLogs { ln_x: r.ln_x(), ln_y: r.ln_y(), ln_x_norm: r.ln_x() - ln_c0 }
}

/// Exported per-record data.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExponentRecord {
    pub id: usize,
    pub q_norm: f64,
    pub p_norm: f64,
    pub exponent: f64,
    pub beta_contribution: f64,
    pub gamma_contribution: f64,
    pub markoff_product: f64,
}

fn max_of(it: impl Iterator<Item = f64>) -> Option<f64> {
    it.fold(None, |acc, x| Some(acc.map_or(x, |a: f64| a.max(x))))
}

/// `μ̂`: largest normalised exponent over records with `||p_2|| ∈ [R^{1/2}, R]`.
pub fn mu_hat(table: &RecordTable, r: f64) -> Result<(f64, Vec<ExponentRecord>)> {
    let c0 = ln_normaliser(table);
    let shape = table.shape;
    let lo = r.sqrt().max(MIN_DENOMINATOR);
    let logs = record_logs(table, c0);
    let mu = max_of(mu_window(table, r).map(|rec| logs_of(rec, c0).exponent()))
        .ok_or_else(|| Error::EmptyWindow(format!("no records with ||p2|| in [{lo:.3e}, {r:.3e}]")))?;
    let exported = logs
        .iter()
        .map(|(i, l)| {
            let rec = &table.records[*i];
            ExponentRecord {
                id: *i,
                q_norm: rec.y(),
                p_norm: rec.x(),
                exponent: l.exponent(),
                beta_contribution: l.beta_contribution(),
                gamma_contribution: l.gamma_contribution(shape.m, shape.n),
                markoff_product: rec.markoff_product(),
            }
        })
        .collect();
    Ok((mu, exported))
}

/// Largest `s* = ||p_2|| / ||p_1||` among eligible records.
pub fn default_shear_budget(table: &RecordTable) -> Option<f64> {
    max_of(table.records.iter().filter(|r| eligible(r)).map(|r| r.ln_y() - r.ln_x())).map(f64::exp)
}

fn ln_s_budget(table: &RecordTable) -> Option<f64> {
    max_of(table.records.iter().filter(|r| eligible(r)).map(|r| r.ln_y() - r.ln_x()))
}

/// `β̂`: largest optimal-shear contribution with `ln s* ∈ [ln S / 4, ln S]`.
pub fn beta_hat(table: &RecordTable, s: f64) -> Result<f64> {
    beta_hat_ln(table, s.ln())
}

pub(crate) fn beta_hat_ln(table: &RecordTable, ln_s: f64) -> Result<f64> {
    let c0 = ln_normaliser(table);
    max_of(
        record_logs(table, c0)
            .iter()
            .filter(|(_, l)| l.ln_s_star() >= ln_s / 4.0 && l.ln_s_star() <= ln_s)
            .map(|(_, l)| l.beta_contribution()),
    )
    .ok_or_else(|| Error::EmptyWindow(format!("no records with ln s* in [{:.3}, {ln_s:.3}]", ln_s / 4.0)))
}

/// `γ̂`: largest optimal-time contribution with `t* ∈ [T/4, T]`, clamped at 0.
pub fn gamma_hat(table: &RecordTable, t: f64) -> Result<f64> {
    let c0 = ln_normaliser(table);
    let (m, n) = (table.shape.m, table.shape.n);
    let g = max_of(
        record_logs(table, c0)
            .iter()
            .filter(|(_, l)| l.t_star() >= t / 4.0 && l.t_star() <= t)
            .map(|(_, l)| l.gamma_contribution(m, n)),
    )
    .ok_or_else(|| Error::EmptyWindow(format!("no records with t* in [{:.3}, {t:.3}]", t / 4.0)))?;
    Ok(g.max(0.0))
}

/// Estimates of the Markoff constant and of `σ`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MarkoffSigma {
    pub c_tilde: f64,
    /// `None` when `c̃` vanishes within tolerance (`σ = ∞`).
    pub sigma: Option<f64>,
}

/// Below this `c̃` is treated as zero.
pub const MARKOFF_ZERO: f64 = 1e-6;

/// `ĉ̃ = min x y^{n/m}` and `σ̂ = max (1/residual) / s*^{n/d}` over the `μ` window.
pub fn markoff_sigma(table: &RecordTable) -> Result<MarkoffSigma> {
    let r = table.radius_reached;
    let (m, n) = (table.shape.m as f64, table.shape.n as f64);
    let d = m + n;
    let window: Vec<&Record> = mu_window(table, r).collect();
    if window.is_empty() {
        return Err(Error::EmptyWindow("no records for the Markoff window".into()));
    }
    let ln_c = window.iter().map(|r| ln_markoff(r)).fold(f64::INFINITY, f64::min);
    // (1/x) / (y/x)^{n/d}
    let ln_sigma = window
        .iter()
        .map(|r| -r.ln_x() - n / d * (r.ln_y() - r.ln_x()))
        .fold(f64::NEG_INFINITY, f64::max);
    let c_tilde = ln_c.exp();
    let sigma = (c_tilde > MARKOFF_ZERO).then(|| ln_sigma.exp());
    Ok(MarkoffSigma { c_tilde, sigma })
}

/// Sign class of a planar vector, `sgn(v_1 / v_2)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Side {
    Plus,
    Minus,
}

pub fn side_of(r: &Record) -> Option<Side> {
    use num_traits::{Signed, Zero};
    let c = r.vector.coords();
    if c.len() != 2 || c[0].is_zero() || c[1].is_zero() {
        return None;
    }
    Some(if c[0].is_positive() == c[1].is_positive() { Side::Plus } else { Side::Minus })
}

/// One-sided `μ^±` and `c̃^±`; `None` when the class has no windowed record.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct OneSided {
    pub mu: Option<f64>,
    pub c_tilde: Option<f64>,
}

pub fn one_sided(table: &RecordTable, side: Side) -> Result<OneSided> {
    if table.shape.d() != 2 {
        return Err(Error::InvalidArgument("one-sided estimates need d = 2".into()));
    }
    let r = table.radius_reached;
    let lo = r.sqrt().max(MIN_DENOMINATOR);
    let c0 = ln_normaliser(table);
    let members: Vec<(usize, RecordLogs)> = record_logs(table, c0)
        .into_iter()
        .filter(|(i, _)| {
            let rec = &table.records[*i];
            rec.y() >= lo && rec.y() <= r && side_of(rec) == Some(side)
        })
        .collect();
    let mu = max_of(members.iter().map(|(_, l)| l.exponent()));
    let c_tilde = members
        .iter()
        .map(|(i, _)| table.records[*i].markoff_product())
        .fold(None, |acc: Option<f64>, x| Some(acc.map_or(x, |a| a.min(x))));
    Ok(OneSided { mu, c_tilde })
}

/// Running (unnormalised, all-radius) estimates; monotone in the table radius.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunningEstimates {
    pub mu: f64,
    pub beta: f64,
    pub gamma: f64,
    pub c_tilde: f64,
}

pub fn running_estimates(table: &RecordTable) -> Option<RunningEstimates> {
    let (m, n) = (table.shape.m, table.shape.n);
    let logs = record_logs(table, 0.0);
    if logs.is_empty() {
        return None;
    }
    let mu = logs.iter().map(|(_, l)| l.exponent()).fold(f64::NEG_INFINITY, f64::max);
    let beta = logs.iter().map(|(_, l)| l.beta_contribution()).fold(f64::NEG_INFINITY, f64::max);
    let gamma = logs.iter().map(|(_, l)| l.gamma_contribution(m, n)).fold(f64::NEG_INFINITY, f64::max).max(0.0);
    let c_tilde = table.records.iter().filter(|r| eligible(r)).map(|r| r.markoff_product()).fold(f64::INFINITY, f64::min);
    Some(RunningEstimates { mu, beta, gamma, c_tilde })
}

/// Plot data: `(||p_2||, running μ, running β, running γ)` after each record.
pub fn running_series(table: &RecordTable) -> Vec<(f64, RunningEstimates)> {
    let mut out = Vec::new();
    for (k, rec) in table.records.iter().enumerate() {
        if !eligible(rec) {
            continue;
        }
        let sub = RecordTable {
            shape: table.shape,
            records: table.records[..=k].to_vec(),
            radius_reached: rec.y(),
            exactness: table.exactness.clone(),
        };
        if let Some(e) = running_estimates(&sub) {
            out.push((rec.y(), e));
        }
    }
    out
}

/// Default windows for a table: `R` = radius, `S` = max `s*`, `T = ln S`.
pub fn default_windows(table: &RecordTable) -> Result<(f64, f64, f64)> {
    let ln_s = ln_s_budget(table).ok_or_else(|| Error::EmptyWindow("no eligible records".into()))?;
    Ok((table.radius_reached, ln_s, ln_s))
}
