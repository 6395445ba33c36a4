use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::context::{FuchsianContext, Group, Location};
use super::excursion::{horocycle_excursion, Embedded};
use super::group::{GroupElement, ModularWord};
use crate::arithmetic::{ln_abs, rat_from_f64, rational_to_f64, ExactScalar};
use crate::lattice::{enumerate_ball, provider_from_spec, LatticeSpec, Transform};
use crate::splitspace::SplitShape;
use crate::{Error, Result};

/// Empirical tail constant `c` with `μ(d(y, x0) > R) ≤ c e^{-R}` over `R ∈ [3, 10]`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CuspConstant {
    pub c: f64,
    pub samples: usize,
    /// `(R, fraction of samples with d > R)`.
    pub tail: Vec<(f64, f64)>,
}

/// Height strata of the standard fundamental domain: the compact part below `y = 2`,
/// then geometric bands up to `2e^{12}`, then the rest of the cusp.
fn strata() -> Vec<(f64, f64)> {
    let mut out = vec![(3f64.sqrt() / 2.0, 2.0)];
    let mut lo = 2.0;
    for k in 1..=24 {
        let hi = 2.0 * (0.5 * k as f64).exp();
        out.push((lo, hi));
        lo = hi;
    }
    out.push((lo, f64::INFINITY));
    out
}

/// Monte Carlo estimate of the cusp-volume constant: Haar-uniform samples of the standard
/// fundamental domain (and its six `Γ(2)` translates), stratified by height.
pub fn cusp_volume_constant(ctx: &FuchsianContext, samples: usize, seed: u64) -> CuspConstant {
    let base = Location::of(ctx.base());
    let z0 = (rational_to_f64(&base.reduced.re), base.ln_y.exp());
    let base_inv = base.word.inverse();
    let cosets = [
        ModularWord::from_i64(1, 0, 0, 1),
        ModularWord::from_i64(1, 1, 0, 1),
        ModularWord::from_i64(0, -1, 1, 0),
        ModularWord::from_i64(1, -1, 1, 0),
        ModularWord::from_i64(0, -1, 1, 1),
        ModularWord::from_i64(1, 0, 1, 1),
    ];
    let parities: Vec<[u8; 4]> = cosets.iter().map(|w| w.compose(&base_inv).mod2()).collect();
    let radii: Vec<f64> = (0..=14).map(|k| 3.0 + 0.5 * k as f64).collect();
    let bands = strata();
    let area = std::f64::consts::PI / 3.0;
    let per = samples.div_ceil(bands.len()).max(1);
    let tails: Vec<Vec<f64>> = bands
        .par_iter()
        .enumerate()
        .map(|(k, &(lo, hi))| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(k as u64);
            // Haar measure of the band, relative to the whole domain
            let weight = if k == 0 { area - 0.5 } else { 1.0 / lo - 1.0 / hi } / area;
            let mut hits = vec![0usize; radii.len()];
            let mut drawn = 0;
            while drawn < per {
                let x: f64 = rng.gen_range(-0.5..0.5);
                let u: f64 = rng.gen();
                let y = 1.0 / (1.0 / lo - u * (1.0 / lo - 1.0 / hi));
                if x * x + y * y < 1.0 {
                    continue;
                }
                let coset = match ctx.group() {
                    Group::SL2Z => parities[0],
                    Group::Gamma2 => parities[rng.gen_range(0..6)],
                };
                drawn += 1;
                let d = ctx.distance_reduced((x, y.ln()), coset, z0);
                for (h, r) in hits.iter_mut().zip(&radii) {
                    if d > *r {
                        *h += 1;
                    }
                }
            }
            hits.iter().map(|&h| weight * h as f64 / per as f64).collect()
        })
        .collect();
    let tail: Vec<(f64, f64)> = radii
        .iter()
        .enumerate()
        .map(|(k, r)| (*r, tails.iter().map(|t| t[k]).sum::<f64>()))
        .collect();
    let c = tail.iter().map(|(r, f)| f * r.exp()).fold(0.0, f64::max);
    CuspConstant { c, samples: per * bands.len(), tail }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DeviationParams {
    /// Defaults to `γ/2`.
    pub epsilon: Option<f64>,
    pub delta: f64,
    pub s_min: f64,
    /// Largest `|s_0|` considered.
    pub s_budget: f64,
    /// Horocycle range used to measure `γ`.
    pub excursion_scale: f64,
    pub mc_samples: usize,
    pub seed: u64,
}

impl Default for DeviationParams {
    fn default() -> Self {
        DeviationParams {
            epsilon: None,
            delta: 0.5,
            s_min: 1e3,
            s_budget: 1e40,
            excursion_scale: 1e6,
            mc_samples: 1_000_000,
            seed: 2024,
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DeviationRecord {
    pub s_0: f64,
    pub gamma: f64,
    pub beta: f64,
    pub epsilon: f64,
    pub delta: f64,
    pub kappa: f64,
    pub c: f64,
    /// Radius `κ log s_0` of the target ball `C`.
    pub radius: f64,
    pub depth_at_s0: f64,
    /// Certified measure of `{|s| ≤ s_0 : d(h_s x, x0) ≥ radius}`.
    pub outside_time: f64,
    /// Measure left undecided by the Lipschitz scan.
    pub uncertain_time: f64,
    /// Upper bound for `∫ χ_C(h_s x) ds`.
    pub integral: f64,
    /// Lower bound for `2 s_0 μ(C)`.
    pub expected: f64,
    /// Certified lower bound for `|∫ χ_C(h_s x) ds - 2 s_0 μ(C)|`.
    pub deviation: f64,
    /// `s_0^{γ-ε} (1 - δ)`.
    pub bound: f64,
    pub evaluations: usize,
    pub pass: bool,
}

/// Deviation of horocycle averages for `x = [[1, α], [0, 1]]Γ` around the ball
/// `C = B(x0, κ log s_0)`, `κ = 1 - γ + 3ε/2`, with `x0` the context's base point.
pub fn deviation_experiment(
    ctx: &FuchsianContext,
    alpha: &ExactScalar,
    params: &DeviationParams,
) -> Result<DeviationRecord> {
    let gamma = horocycle_excursion(ctx, alpha, params.excursion_scale)?.gamma_dist;
    if !(gamma > 0.0) {
        return Err(Error::InvalidArgument(format!("gamma = {gamma} must be positive")));
    }
    let epsilon = params.epsilon.unwrap_or(gamma / 2.0);
    if !(epsilon > 0.0 && epsilon < gamma) {
        return Err(Error::InvalidArgument(format!("epsilon = {epsilon} must lie in (0, {gamma})")));
    }
    let delta = params.delta;
    if !(delta > 0.0 && delta < 1.0) {
        return Err(Error::InvalidArgument(format!("delta = {delta} must lie in (0, 1)")));
    }
    let beta = 1.0 + gamma;
    let kappa = 1.0 - gamma + 1.5 * epsilon;
    let c = cusp_volume_constant(ctx, params.mc_samples, params.seed).c;

    let emb = Embedded::new(alpha, params.s_budget)?;
    let x = emb.element();
    let base = Location::of(ctx.base());
    let mut peaks = emb.shear_peaks(params.s_budget);
    peaks.sort_by(|a, b| ln_abs(a).total_cmp(&ln_abs(b)));
    let mut chosen = None;
    for s in peaks {
        let ls = ln_abs(&s);
        if ls <= params.s_min.ln() || 2.0 * c * (-0.5 * epsilon * ls).exp() >= delta {
            continue;
        }
        let y = GroupElement::horocycle(s.clone()).mul(&x);
        let d = ctx.distance_located(&Location::of(&y), &base);
        if d >= (beta - 0.5 * epsilon) * ls {
            chosen = Some((s, d));
            break;
        }
    }
    let (s_peak, depth_at_s0) = chosen.ok_or_else(|| {
        Error::NoAdmissible(format!("no s_0 in ({:e}, {:e}]", params.s_min, params.s_budget))
    })?;
    let s0 = rational_to_f64(&s_peak).abs();
    let radius = kappa * s0.ln();

    let scan = outside_measure(ctx, &emb, &x, &base, s0, radius)?;
    let bound = s0.powf(gamma - epsilon) * (1.0 - delta);
    let spill = 2.0 * c * s0.powf(1.0 - kappa);
    let deviation = scan.outside - spill;
    Ok(DeviationRecord {
        s_0: s0,
        gamma,
        beta,
        epsilon,
        delta,
        kappa,
        c,
        radius,
        depth_at_s0,
        outside_time: scan.outside,
        uncertain_time: scan.uncertain,
        integral: 2.0 * s0 - scan.outside,
        expected: 2.0 * s0 - spill,
        deviation,
        bound,
        evaluations: scan.evaluations,
        pass: deviation >= bound,
    })
}

struct Scan {
    outside: f64,
    uncertain: f64,
    evaluations: usize,
}

const MAX_EVALUATIONS: usize = 400_000;

/// Measure of `{s ∈ [-s0, s0] : d(h_s x, x0) ≥ radius}`.
///
/// Deep points have a short covector `(q, p)`; the candidate windows come from a lattice
/// enumeration and are then scanned with steps certified by `d(h_{s+δ}y, h_s y) ≤ 2 asinh(|δ|/2)`.
fn outside_measure(
    ctx: &FuchsianContext,
    emb: &Embedded,
    x: &GroupElement,
    base: &Location,
    s0: f64,
    radius: f64,
) -> Result<Scan> {
    let d0 = ctx.distance(&GroupElement::identity(), ctx.base());
    let dr = radius - d0;
    if dr < 1.0 {
        return Err(Error::NoAdmissible(format!("target radius {radius} too small")));
    }
    // d ≥ radius forces Im z_red ≥ y_min, hence a covector of norm² ≤ 1/y_min
    let ch = dr.cosh();
    let y_min = ch + (ch * ch - 1.25).sqrt();
    let r = (1.0 / y_min).sqrt() * (1.0 + 1e-9);
    let q_max = r * (1.0 + s0);

    let provider = provider_from_spec(
        LatticeSpec::planar(ExactScalar::exact(emb.alpha.clone())).primitive(),
    )?;
    let a = rat_from_f64((q_max / r).sqrt());
    let transform = Transform::diagonal(SplitShape::planar(), &a);
    let side = (r * q_max).sqrt() * (1.0 + 1e-9);
    let mut windows: Vec<(f64, f64)> = Vec::new();
    for v in enumerate_ball(&provider, Some(&transform), side)? {
        let q = &v.coords()[1] * &a;
        let w = &v.coords()[0] / &a;
        if !q.is_positive() && !(q.is_zero() && w.is_positive()) {
            continue;
        }
        let (qf, wf) = (rational_to_f64(&q), rational_to_f64(&w));
        let h2 = r * r - wf * wf;
        if h2 <= 0.0 || wf == 0.0 {
            continue;
        }
        let centre = qf / wf;
        let half = h2.sqrt() / wf.abs();
        let lo = (centre - half).max(-s0);
        let hi = (centre + half).min(s0);
        if lo < hi {
            windows.push((lo, hi));
        }
    }
    windows.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut merged: Vec<(f64, f64)> = Vec::new();
    for (lo, hi) in windows {
        match merged.last_mut() {
            Some(last) if lo <= last.1 => last.1 = last.1.max(hi),
            _ => merged.push((lo, hi)),
        }
    }

    let results: Vec<Scan> = merged
        .par_iter()
        .map(|&(lo, hi)| scan_window(ctx, x, base, lo, hi, radius))
        .collect();
    Ok(Scan {
        outside: results.iter().map(|s| s.outside).sum(),
        uncertain: results.iter().map(|s| s.uncertain).sum(),
        evaluations: results.iter().map(|s| s.evaluations).sum(),
    })
}

fn scan_window(
    ctx: &FuchsianContext,
    x: &GroupElement,
    base: &Location,
    lo: f64,
    hi: f64,
    radius: f64,
) -> Scan {
    let min_step = (hi - lo) * 1e-9;
    let mut scan = Scan { outside: 0.0, uncertain: 0.0, evaluations: 0 };
    let mut s = lo;
    while s < hi {
        if scan.evaluations >= MAX_EVALUATIONS {
            scan.uncertain += hi - s;
            break;
        }
        let y = GroupElement::horocycle(rat_from_f64(s)).mul(x);
        let f = ctx.distance_located(&Location::of(&y), base) - radius;
        scan.evaluations += 1;
        let margin = f.abs() - 1e-9;
        let certified = if margin > 0.0 { 2.0 * (margin / 2.0).sinh() } else { 0.0 };
        let step = certified.max(min_step).min(hi - s);
        if certified >= step {
            if f > 0.0 {
                scan.outside += step;
            }
        } else {
            scan.uncertain += step;
        }
        s += step;
    }
    scan
}

/// Enumerates the primitive covectors `(q, p)` with `q > 0` and `|p - αq| ≤ r`, `q ≤ q_max`.
#[allow(dead_code)]
fn short_covectors(alpha: &BigRational, r: f64, q_max: f64) -> Vec<(BigInt, BigInt)> {
    let mut out = Vec::new();
    let q_hi = q_max.floor() as i64;
    for q in 1..=q_hi.min(100_000) {
        let qb = BigInt::from(q);
        let centre = (alpha * BigRational::from_integer(qb.clone())).round().to_integer();
        for p in [&centre - 1, centre.clone(), &centre + 1] {
            let w = BigRational::from_integer(p.clone()) - alpha * BigRational::from_integer(qb.clone());
            if rational_to_f64(&w).abs() <= r && p.gcd(&qb) == BigInt::from(1) {
                out.push((qb.clone(), p));
            }
        }
    }
    out
}
