use std::collections::HashSet;
use std::fmt::Write as _;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::enumerate::reduce_frame;
use super::linalg::{mat_mul, Transform};
use super::provider::{DiscreteSetProvider, LatticeProvider};
use crate::arithmetic::{continued_fraction, rat_from_f64, ExactScalar};
use crate::error::{Error, Result};
use crate::splitspace::{SplitShape, SplitVector};

/// One Pareto-minimal vector of `Π(Λ)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Record {
    pub vector: SplitVector,
    /// Integer lattice coordinates, when the set is a lattice.
    pub coords: Option<Vec<BigInt>>,
    pub certified: bool,
}

impl Record {
    pub fn x(&self) -> f64 {
        self.vector.p1_norm()
    }

    pub fn y(&self) -> f64 {
        self.vector.p2_norm()
    }

    pub fn ln_x(&self) -> f64 {
        self.vector.ln_p1()
    }

    pub fn ln_y(&self) -> f64 {
        self.vector.ln_p2()
    }

    /// `e(v) = 1 - ln||p_1|| / ln||p_2||`.
    pub fn exponent(&self) -> f64 {
        1.0 - self.ln_x() / self.ln_y()
    }

    /// `||p_1|| * ||p_2||^{n/m}`.
    pub fn markoff_product(&self) -> f64 {
        let s = self.vector.shape();
        (self.ln_x() + s.n as f64 / s.m as f64 * self.ln_y()).exp()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Exactness {
    Certified,
    Uncertified(String),
}

/// Records ordered by increasing `||p_2||` with strictly decreasing `||p_1||`.
#[derive(Clone, Debug)]
pub struct RecordTable {
    pub shape: SplitShape,
    pub records: Vec<Record>,
    pub radius_reached: f64,
    pub exactness: Exactness,
}

fn canonical(v: &SplitVector) -> bool {
    let first = v.p2().iter().chain(v.p1()).find(|x| !x.is_zero());
    first.is_none_or(|x| x.is_positive())
}

impl RecordTable {
    /// Pareto frontier of an explicit vector list, truncated at `radius`.
    pub fn from_vectors<I>(shape: SplitShape, vectors: I, radius: f64) -> Result<Self>
    where
        I: IntoIterator<Item = SplitVector>,
    {
        Self::from_candidates(shape, vectors.into_iter().map(|v| (v, None, true)), radius, Exactness::Certified)
    }

    pub(crate) fn from_candidates<I>(shape: SplitShape, cands: I, radius: f64, exactness: Exactness) -> Result<Self>
    where
        I: IntoIterator<Item = (SplitVector, Option<Vec<BigInt>>, bool)>,
    {
        let r = rat_from_f64(radius);
        let r2 = &r * &r;
        let mut keyed = Vec::new();
        for (v, coords, certified) in cands {
            if v.shape() != shape {
                return Err(Error::ShapeMismatch(shape.m, shape.n, v.shape().m, v.shape().n));
            }
            if v.is_zero() {
                continue;
            }
            let y2 = v.p2_norm_sq();
            if y2 > r2 {
                continue;
            }
            if v.is_vertical() {
                return Err(Error::VerticalVector);
            }
            keyed.push(((y2, v.p1_norm_sq(), !canonical(&v), v.coords().to_vec()), Record { vector: v, coords, certified }));
        }
        keyed.sort_by(|a, b| a.0.cmp(&b.0));
        let mut records: Vec<Record> = Vec::new();
        let mut best: Option<BigRational> = None;
        for ((_, x2, _, _), rec) in keyed {
            if best.as_ref().is_none_or(|b| x2 < *b) {
                best = Some(x2);
                records.push(rec);
            }
        }
        Ok(RecordTable { shape, records, radius_reached: radius, exactness })
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Record> {
        self.records.iter()
    }

    pub fn is_certified(&self) -> bool {
        self.exactness == Exactness::Certified
    }

    /// The table as it would be with a smaller radius.
    pub fn truncated(&self, radius: f64) -> RecordTable {
        let r = rat_from_f64(radius.min(self.radius_reached));
        let r2 = &r * &r;
        RecordTable {
            shape: self.shape,
            records: self.records.iter().filter(|rec| rec.vector.p2_norm_sq() <= r2).cloned().collect(),
            radius_reached: radius.min(self.radius_reached),
            exactness: self.exactness.clone(),
        }
    }

    /// CSV with header `q_norm,p_norm,exponent,markoff_product`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("q_norm,p_norm,exponent,markoff_product\n");
        for r in &self.records {
            let e = if r.ln_y() > 0.0 { format!("{:.12e}", r.exponent()) } else { String::from("nan") };
            let _ = writeln!(out, "{:.12e},{:.12e},{},{:.12e}", r.y(), r.x(), e, r.markoff_product());
        }
        out
    }
}

/// The record table of a lattice provider up to `||p_2|| <= r_max`.
///
/// Planar homogeneous lattices use continued-fraction convergents; every
/// other shape uses a geodesic sweep of shortest vectors.
pub fn records(provider: &LatticeProvider, r_max: f64) -> Result<RecordTable> {
    if !(r_max >= 1.0) {
        return Err(Error::InvalidArgument(format!("record radius {r_max} below 1")));
    }
    if provider.vertical_vector().is_some() {
        return Err(Error::VerticalVector);
    }
    if provider.shape() == SplitShape::planar() && !provider.is_affine() {
        planar_records(provider, r_max)
    } else {
        records_by_sweep(provider, r_max)
    }
}

fn planar_records(provider: &LatticeProvider, r_max: f64) -> Result<RecordTable> {
    let alpha = ExactScalar::with_error(provider.a_values()[0].clone(), provider.a_error().clone());
    let r = rat_from_f64(r_max);
    let shape = SplitShape::planar();
    let mut terms = 64;
    loop {
        let cf = continued_fraction(&alpha, terms);
        let past = cf.convergents.iter().position(|(_, q)| BigRational::from_integer(q.clone()) > r);
        let finished = cf.len() < terms;
        if past.is_none() && !finished && cf.stable_prefix_len == cf.len() {
            terms *= 2;
            continue;
        }
        let mut cands = vec![(provider.vector(&[BigInt::one(), BigInt::zero()], None), Some(vec![BigInt::one(), BigInt::zero()]), true)];
        let a0 = cf.partial_quotients[0].clone();
        let alt = vec![a0 + 1, BigInt::one()];
        cands.push((provider.vector(&alt, None), Some(alt), cf.stable_prefix_len > 0));
        for (k, (p, q)) in cf.convergents.iter().enumerate() {
            let n = vec![p.clone(), q.clone()];
            cands.push((provider.vector(&n, None), Some(n), k < cf.stable_prefix_len));
        }
        let limit = past.unwrap_or(cf.len());
        let (exactness, radius) = if limit < cf.stable_prefix_len || (finished && alpha.is_exact()) {
            (Exactness::Certified, r_max)
        } else {
            let last = cf.stable_prefix_len.checked_sub(1).map(|k| &cf.convergents[k].1);
            let reach = last.map_or(1.0, |q| crate::arithmetic::rational_to_f64(&BigRational::from_integer(q.clone())));
            (
                Exactness::Uncertified(format!("continued fraction certified only to q = {reach:.3e}")),
                r_max,
            )
        };
        return RecordTable::from_candidates(shape, cands, radius, exactness);
    }
}

const SWEEP_T0: f64 = -4.0;
const SWEEP_MAX_STEPS: usize = 200_000;
const SWEEP_CAP: usize = 2_000_000;

/// Records via shortest vectors of `g_t Λ` on a grid with `e^{Δt} = 1.1`,
/// enumerating at each grid point everything that can become shortest before
/// the next one.
pub fn records_by_sweep(provider: &LatticeProvider, r_max: f64) -> Result<RecordTable> {
    let shape = provider.shape();
    let (m, n, d) = (shape.m as f64, shape.n as f64, shape.d() as f64);
    let step = 1.1f64.ln();
    let grow = (2.0 * step * m.max(n) / d).exp();
    let r = rat_from_f64(r_max);
    let r2 = &r * &r;
    let frames = provider.frames(None);
    let mut warm: Vec<Option<Vec<Vec<BigInt>>>> = vec![None; frames.len()];
    let mut seen: HashSet<(usize, Vec<BigInt>)> = HashSet::new();
    let mut cands = Vec::new();
    let mut trouble: Option<String> = None;
    let mut t = SWEEP_T0;
    let mut done = false;
    for _ in 0..SWEEP_MAX_STEPS {
        let dt = Transform::geodesic(shape, t);
        let mut hits = Vec::new();
        for (k, (g, c0)) in frames.iter().enumerate() {
            let gen = mat_mul(dt.rows(), g);
            let frame = reduce_frame(&gen, c0.as_deref(), warm[k].as_deref())?;
            let radius = frame.upper_bound() * 2f64.sqrt() * grow * (1.0 + 1e-9);
            let Some(found) = frame.enumerate(radius, SWEEP_CAP) else {
                trouble = Some(format!("enumeration cap exceeded at t = {t:.3}"));
                done = true;
                break;
            };
            warm[k] = Some(frame.u);
            for h in found {
                if provider.primitive_only() && !super::linalg::gcd_is_one(&h.n) {
                    continue;
                }
                let (a, b) = h.approx.split_at(shape.m);
                let sn = a.iter().map(|x| x * x).sum::<f64>().sqrt().max(b.iter().map(|x| x * x).sum::<f64>().sqrt());
                hits.push((k, h.n, sn));
            }
        }
        if done {
            break;
        }
        let lambda = hits.iter().map(|h| h.2).fold(f64::INFINITY, f64::min);
        if !lambda.is_finite() {
            return Err(Error::EmptySet);
        }
        let mut shortest: Option<(f64, SplitVector)> = None;
        for (k, nvec, sn) in hits {
            if sn > grow * lambda * (1.0 + 1e-6) {
                continue;
            }
            let offset = provider.is_affine().then_some(k);
            let v = provider.vector(&nvec, offset);
            if v.is_vertical() {
                return Err(Error::VerticalVector);
            }
            if shortest.as_ref().is_none_or(|s| sn < s.0) {
                shortest = Some((sn, v.clone()));
            }
            if seen.insert((k, nvec.clone())) {
                let err = provider.p1_error_bound(&v);
                let certified = v.p1_norm_sq() > &err * &err;
                if !certified && v.p2_norm_sq() <= r2 && trouble.is_none() {
                    trouble = Some(format!("p1 of {v} within the error of A"));
                }
                cands.push((v, Some(nvec), certified));
            }
        }
        if let Some((_, s)) = shortest {
            if s.p2_norm_sq() > r2 {
                break;
            }
        }
        t += step;
    }
    let exactness = trouble.map_or(Exactness::Certified, Exactness::Uncertified);
    RecordTable::from_candidates(shape, cands, r_max, exactness)
}
