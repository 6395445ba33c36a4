use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::context::{FuchsianContext, Location};
use super::group::{round_dyadic, GroupElement};
use crate::arithmetic::{continued_fraction, ln_abs, rat_from_f64, ExactScalar};
use crate::{Error, Result};

/// Depth reached by a trajectory before the quantitative Mahler ratio is meaningful.
pub const MIN_DEPTH: f64 = 5.0;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CuspDepthSample {
    pub parameter: f64,
    pub depth: f64,
    pub log_alpha1: f64,
    /// `depth / (2 log α_1)`, absent when the point is outside the cusps or `α_1 ≤ 1`.
    pub ratio: Option<f64>,
}

/// `g_{-t}·x0` for each `t`.
pub fn geodesic_trajectory(x0: &GroupElement, times: &[f64]) -> Vec<(f64, GroupElement)> {
    times.iter().map(|&t| (t, GroupElement::geodesic(-t).mul(x0))).collect()
}

/// Depth `d_I` against `2 log α_1(Λ_{x,I})` along a trajectory, measured from the context's base point.
pub fn quantitative_mahler_check(
    ctx: &FuchsianContext,
    trajectory: &[(f64, GroupElement)],
    cusps: &[usize],
) -> Result<Vec<CuspDepthSample>> {
    let base = Location::of(ctx.base());
    let samples: Vec<CuspDepthSample> = trajectory
        .par_iter()
        .map(|(param, x)| {
            let loc = Location::of(x);
            let depth = ctx.depth_located(&loc, cusps, &base);
            let log_alpha1 = ctx.log_alpha1_located(&loc, cusps);
            let ratio = (depth > 0.0 && log_alpha1 > 0.0).then(|| depth / (2.0 * log_alpha1));
            CuspDepthSample { parameter: *param, depth, log_alpha1, ratio }
        })
        .collect();
    if samples.iter().all(|s| s.depth < MIN_DEPTH) {
        return Err(Error::Shallow(MIN_DEPTH));
    }
    Ok(samples)
}

/// Excursion rates of the embedded point `[[1, α], [0, 1]]Γ` along horocycle and geodesic.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct HyperbolicExcursion {
    pub beta_dist: f64,
    pub gamma_dist: f64,
    /// `beta_dist - 1 - gamma_dist`.
    pub residual: f64,
    pub s_max: f64,
    pub t_max: f64,
    /// `(s, d_I(h_s x, x0))`.
    pub s_samples: Vec<(f64, f64)>,
    /// `(t, d_I(g_t x, x0))`.
    pub t_samples: Vec<(f64, f64)>,
}

const GRID: usize = 240;

/// The rational used in place of `α` at shear scale `s_max`, with the convergents
/// whose peaks fall inside that scale.
pub(crate) struct Embedded {
    pub alpha: BigRational,
    pub convergents: Vec<(BigInt, BigInt)>,
}

impl Embedded {
    pub fn new(alpha: &ExactScalar, s_max: f64) -> Result<Self> {
        if alpha.is_exact() {
            return Err(Error::Cuspidal);
        }
        let bits = (2.0 * s_max.max(2.0).log2()).ceil() as usize + 80;
        let err = ln_abs(alpha.certified_error());
        if err > -(bits as f64 - 16.0) * std::f64::consts::LN_2 {
            return Err(Error::InvalidArgument(format!(
                "scalar precision too low for shear scale {s_max:e}"
            )));
        }
        let value = round_dyadic(alpha.value(), bits);
        let cf = continued_fraction(alpha, 4 * bits);
        let convergents = cf.stable_convergents().to_vec();
        Ok(Embedded { alpha: value, convergents })
    }

    pub fn element(&self) -> GroupElement {
        GroupElement::embedding(self.alpha.clone())
    }

    /// `p - α q`.
    pub fn defect(&self, p: &BigInt, q: &BigInt) -> BigRational {
        BigRational::from_integer(p.clone()) - &self.alpha * BigRational::from_integer(q.clone())
    }

    /// Horocycle parameters `s = q/(p - αq)` where the covector `(q, p)` is shortest.
    pub fn shear_peaks(&self, s_max: f64) -> Vec<BigRational> {
        let mut out = Vec::new();
        for (p, q) in &self.convergents {
            let w = self.defect(p, q);
            if w.is_zero() || q.is_zero() {
                continue;
            }
            let s = BigRational::from_integer(q.clone()) / w;
            let ls = ln_abs(&s);
            if ls >= 0.0 && ls <= s_max.ln() {
                out.push(s);
            }
        }
        out
    }

    /// Geodesic times `ln(q/|p - αq|)` of the same peaks.
    pub fn time_peaks(&self, t_max: f64) -> Vec<f64> {
        let mut out = Vec::new();
        for (p, q) in &self.convergents {
            let w = self.defect(p, q);
            if w.is_zero() || !q.is_positive() {
                continue;
            }
            let t = ln_abs(&BigRational::from_integer(q.clone())) - ln_abs(&w);
            if t > 0.0 && t <= t_max {
                out.push(t);
            }
        }
        out
    }
}

/// `beta_dist` and `gamma_dist` for `x = [[1, α], [0, 1]]Γ` over `|s| ≤ s_max` and `t ≤ ln s_max`.
///
/// Each rate is the largest `depth / log|s|` (resp. `depth / t`) over the top half of the log
/// range, sampled on a log grid augmented with the shortest-covector peaks of the convergents.
pub fn horocycle_excursion(
    ctx: &FuchsianContext,
    alpha: &ExactScalar,
    s_max: f64,
) -> Result<HyperbolicExcursion> {
    if !(s_max > std::f64::consts::E) {
        return Err(Error::InvalidArgument("s_max must exceed e".into()));
    }
    let emb = Embedded::new(alpha, s_max)?;
    let x = emb.element();
    let base = Location::of(ctx.base());
    let cusps = ctx.all_cusps();
    let t_max = s_max.ln();

    let mut shears: Vec<BigRational> = Vec::new();
    for k in 0..=GRID {
        let s = (t_max * k as f64 / GRID as f64).exp();
        shears.push(rat_from_f64(s));
        shears.push(rat_from_f64(-s));
    }
    shears.extend(emb.shear_peaks(s_max));
    let mut s_samples: Vec<(f64, f64)> = shears
        .par_iter()
        .map(|s| {
            let y = GroupElement::horocycle(s.clone()).mul(&x);
            let d = ctx.depth_located(&Location::of(&y), &cusps, &base);
            (crate::arithmetic::rational_to_f64(s), d)
        })
        .collect();
    s_samples.sort_by(|a, b| a.0.total_cmp(&b.0));

    let mut times: Vec<f64> = (0..=GRID).map(|k| t_max * k as f64 / GRID as f64).collect();
    times.extend(emb.time_peaks(t_max));
    let mut t_samples: Vec<(f64, f64)> = times
        .par_iter()
        .map(|&t| {
            let y = GroupElement::geodesic(t).mul(&x);
            (t, ctx.depth_located(&Location::of(&y), &cusps, &base))
        })
        .collect();
    t_samples.sort_by(|a, b| a.0.total_cmp(&b.0));

    let lo = 0.5 * t_max;
    let beta_dist = s_samples
        .iter()
        .filter(|(s, _)| s.abs().ln() >= lo)
        .map(|(s, d)| d / s.abs().ln())
        .fold(0.0, f64::max);
    let gamma_dist = t_samples
        .iter()
        .filter(|(t, _)| *t >= lo)
        .map(|(t, d)| d / t)
        .fold(0.0, f64::max);
    Ok(HyperbolicExcursion {
        beta_dist,
        gamma_dist,
        residual: beta_dist - 1.0 - gamma_dist,
        s_max,
        t_max,
        s_samples,
        t_samples,
    })
}
