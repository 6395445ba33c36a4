use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::enumerate::reduce_frame;
use super::linalg::{determinant, gcd_is_one, identity, mat_mul, mat_vec, to_rationals, Mat, Transform};
use crate::arithmetic::{parse_decimal, parse_rational, rat_from_f64, scalar_from_spec, ExactScalar, NumberSpec};
use crate::error::{Error, Result};
use crate::splitspace::{SplitShape, SplitVector};

/// An enumerable discrete subset of `R^d \ {0}`.
pub trait DiscreteSetProvider: Sync {
    fn shape(&self) -> SplitShape;

    /// Every point of `transform(set)` with split norm at most `radius`,
    /// deduplicated, each with its multiplicity.
    fn enumerate_with_multiplicity(
        &self,
        transform: Option<&Transform>,
        radius: f64,
    ) -> Result<Vec<(SplitVector, usize)>>;

    /// A split-norm minimiser of `transform(set)`, ties broken
    /// lexicographically on exact coordinates.
    fn shortest_vector(&self, transform: Option<&Transform>) -> Result<SplitVector>;
}

/// Points of `transform(set)` with split norm `<= radius`.
pub fn enumerate_ball<P: DiscreteSetProvider + ?Sized>(
    provider: &P,
    transform: Option<&Transform>,
    radius: f64,
) -> Result<Vec<SplitVector>> {
    if !(radius > 0.0) {
        return Err(Error::InvalidArgument(format!("radius {radius} must be positive")));
    }
    Ok(provider.enumerate_with_multiplicity(transform, radius)?.into_iter().map(|(v, _)| v).collect())
}

/// Like [`enumerate_ball`] but an empty result is an error.
pub fn enumerate_ball_nonempty<P: DiscreteSetProvider + ?Sized>(
    provider: &P,
    transform: Option<&Transform>,
    radius: f64,
) -> Result<Vec<SplitVector>> {
    let out = enumerate_ball(provider, transform, radius)?;
    if out.is_empty() {
        return Err(Error::EmptySet);
    }
    Ok(out)
}

pub fn shortest_vector<P: DiscreteSetProvider + ?Sized>(
    provider: &P,
    transform: Option<&Transform>,
) -> Result<SplitVector> {
    provider.shortest_vector(transform)
}

pub(crate) fn sort_key(v: &SplitVector) -> (BigRational, Vec<BigRational>) {
    (v.split_norm_sq(), v.coords().to_vec())
}

fn sorted_unique(mut pts: Vec<SplitVector>) -> Vec<(SplitVector, usize)> {
    pts.sort_by_key(sort_key);
    let mut out: Vec<(SplitVector, usize)> = Vec::new();
    for p in pts {
        match out.last_mut() {
            Some((q, k)) if *q == p => *k += 1,
            _ => out.push((p, 1)),
        }
    }
    out
}

/// A finite explicit vector set (spectra, orbit samples).
#[derive(Clone, Debug)]
pub struct VectorSet {
    shape: SplitShape,
    vectors: Vec<SplitVector>,
}

impl VectorSet {
    pub fn new(shape: SplitShape, vectors: Vec<SplitVector>) -> Result<Self> {
        if vectors.iter().any(|v| v.shape() != shape) {
            return Err(Error::InvalidArgument("vector shapes differ".into()));
        }
        Ok(VectorSet { shape, vectors: vectors.into_iter().filter(|v| !v.is_zero()).collect() })
    }

    pub fn vectors(&self) -> &[SplitVector] {
        &self.vectors
    }
}

impl DiscreteSetProvider for VectorSet {
    fn shape(&self) -> SplitShape {
        self.shape
    }

    fn enumerate_with_multiplicity(
        &self,
        transform: Option<&Transform>,
        radius: f64,
    ) -> Result<Vec<(SplitVector, usize)>> {
        let r2 = rat_from_f64(radius * radius);
        let pts = self
            .vectors
            .iter()
            .map(|v| transform.map(|t| t.apply(v)).unwrap_or_else(|| v.clone()))
            .filter(|v| v.split_norm_sq() <= r2)
            .collect();
        Ok(sorted_unique(pts))
    }

    fn shortest_vector(&self, transform: Option<&Transform>) -> Result<SplitVector> {
        self.vectors
            .iter()
            .map(|v| transform.map(|t| t.apply(v)).unwrap_or_else(|| v.clone()))
            .min_by_key(sort_key)
            .ok_or(Error::EmptySet)
    }
}

/// `x_A` and its affine variants: `{(p - A q, q)}` plus the offsets.
#[derive(Clone, Debug)]
pub struct LatticeSpec {
    pub shape: SplitShape,
    /// `m x n`, row-major.
    pub a: Vec<ExactScalar>,
    /// Ambient offsets `v_i`; empty means homogeneous.
    pub offsets: Vec<Vec<BigRational>>,
    pub primitive_only: bool,
}

impl LatticeSpec {
    pub fn homogeneous(shape: SplitShape, a: Vec<ExactScalar>) -> Self {
        LatticeSpec { shape, a, offsets: Vec::new(), primitive_only: false }
    }

    /// `x_α` for a single linear form in one variable.
    pub fn planar(alpha: ExactScalar) -> Self {
        Self::homogeneous(SplitShape::planar(), vec![alpha])
    }

    pub fn with_offset(mut self, v0: Vec<BigRational>) -> Self {
        self.offsets.push(v0);
        self
    }

    pub fn primitive(mut self) -> Self {
        self.primitive_only = true;
        self
    }

    /// Parses the JSON form `{m, n, A: [[spec]], offsets: [[rational]], primitive_only}`.
    pub fn from_json(text: &str, precision_bits: u32) -> Result<Self> {
        let file: LatticeSpecFile = serde_json::from_str(text)?;
        file.materialise(precision_bits)
    }
}

/// On-disk lattice description.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LatticeSpecFile {
    pub m: usize,
    pub n: usize,
    #[serde(rename = "A")]
    pub a: Vec<Vec<NumberSpec>>,
    #[serde(default)]
    pub offsets: Vec<Vec<String>>,
    #[serde(default)]
    pub primitive_only: bool,
}

impl LatticeSpecFile {
    pub fn materialise(&self, precision_bits: u32) -> Result<LatticeSpec> {
        let shape = SplitShape::new(self.m, self.n)?;
        if self.a.len() != self.m || self.a.iter().any(|r| r.len() != self.n) {
            return Err(Error::MalformedSpec(format!("A must be {}x{}", self.m, self.n)));
        }
        let a = self
            .a
            .iter()
            .flatten()
            .map(|s| scalar_from_spec(s, precision_bits))
            .collect::<Result<Vec<_>>>()?;
        let offsets = self
            .offsets
            .iter()
            .map(|o| {
                if o.len() != shape.d() {
                    return Err(Error::MalformedSpec(format!("offset needs {} entries", shape.d())));
                }
                o.iter().map(|s| parse_offset(s)).collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(LatticeSpec { shape, a, offsets, primitive_only: self.primitive_only })
    }
}

fn parse_offset(s: &str) -> Result<BigRational> {
    if s.contains('.') {
        parse_decimal(s)
    } else {
        parse_rational(s)
    }
}

/// The materialised lattice: exact generator, offsets in lattice coordinates.
#[derive(Clone, Debug)]
pub struct LatticeProvider {
    spec: LatticeSpec,
    a_val: Vec<BigRational>,
    a_err: BigRational,
    generator: Mat,
    offsets_c0: Vec<Vec<BigRational>>,
    vertical: Option<Vec<BigInt>>,
}

pub fn provider_from_spec(spec: LatticeSpec) -> Result<LatticeProvider> {
    LatticeProvider::new(spec)
}

impl LatticeProvider {
    pub fn new(spec: LatticeSpec) -> Result<Self> {
        let SplitShape { m, n } = spec.shape;
        let d = spec.shape.d();
        if spec.a.len() != m * n {
            return Err(Error::ShapeMismatch(m, n, spec.a.len(), 1));
        }
        if spec.offsets.iter().any(|o| o.len() != d) {
            return Err(Error::InvalidArgument(format!("offsets must have {d} coordinates")));
        }
        if spec.primitive_only && !spec.offsets.is_empty() {
            return Err(Error::InvalidArgument("primitive filtering applies to homogeneous lattices".into()));
        }
        let a_val: Vec<BigRational> = spec.a.iter().map(|x| x.value().clone()).collect();
        let a_err = spec.a.iter().map(|x| x.certified_error().clone()).max().unwrap_or_else(BigRational::zero);
        let mut g = identity(d);
        let mut ginv = identity(d);
        for i in 0..m {
            for j in 0..n {
                g[i][m + j] = -&a_val[i * n + j];
                ginv[i][m + j] = a_val[i * n + j].clone();
            }
        }
        let offsets_c0 = spec.offsets.iter().map(|v| mat_vec(&ginv, v)).collect();
        let mut p = LatticeProvider { spec, a_val, a_err, generator: g, offsets_c0, vertical: None };
        p.vertical = p.find_vertical();
        if !p.spec.offsets.is_empty() {
            p.check_exact_solutions()?;
        }
        Ok(p)
    }

    pub fn spec(&self) -> &LatticeSpec {
        &self.spec
    }

    pub fn is_affine(&self) -> bool {
        !self.spec.offsets.is_empty()
    }

    pub fn primitive_only(&self) -> bool {
        self.spec.primitive_only
    }

    /// The exact generator `[[I, -A], [0, I]]`.
    pub fn generator(&self) -> &Mat {
        &self.generator
    }

    pub fn determinant(&self) -> BigRational {
        determinant(&self.generator)
    }

    pub fn a_values(&self) -> &[BigRational] {
        &self.a_val
    }

    /// Largest certified error among the entries of `A`.
    pub fn a_error(&self) -> &BigRational {
        &self.a_err
    }

    pub fn offsets_c0(&self) -> &[Vec<BigRational>] {
        &self.offsets_c0
    }

    /// An integer `(p, q)` with `p = A q`, `q != 0`, when the exact-rational
    /// structure of `A` guarantees one (homogeneous sets only).
    pub fn vertical_vector(&self) -> Option<&[BigInt]> {
        self.vertical.as_deref()
    }

    fn find_vertical(&self) -> Option<Vec<BigInt>> {
        if self.is_affine() {
            return None;
        }
        let SplitShape { m, n } = self.spec.shape;
        for j in 0..n {
            if (0..m).any(|i| !self.spec.a[i * n + j].is_exact()) {
                continue;
            }
            let l = (0..m).fold(BigInt::one(), |l, i| l.lcm(self.a_val[i * n + j].denom()));
            let mut v = vec![BigInt::zero(); m + n];
            for i in 0..m {
                v[i] = (&self.a_val[i * n + j] * BigRational::from_integer(l.clone())).to_integer();
            }
            v[m + j] = l;
            if self.spec.primitive_only {
                let g = v.iter().fold(BigInt::zero(), |g, x| g.gcd(x));
                v.iter_mut().for_each(|x| *x = &*x / &g);
            }
            return Some(v);
        }
        None
    }

    /// Rejects offsets admitting an integer `v` with `A q = p + v0_1`.
    fn check_exact_solutions(&self) -> Result<()> {
        let SplitShape { m, n } = self.spec.shape;
        for v0 in &self.spec.offsets {
            let (v01, v02) = v0.split_at(m);
            if v02.iter().all(|x| x.is_integer()) && v01.iter().all(|x| x.is_integer()) {
                return Err(Error::ExactSolution);
            }
            if self.spec.a.iter().all(ExactScalar::is_exact) {
                let l = self.a_val.iter().fold(BigInt::one(), |l, x| l.lcm(x.denom()));
                let Some(lu) = l.to_u64() else { continue };
                let total = (lu as f64).powi(n as i32);
                if total > 1e6 {
                    continue;
                }
                let mut q = vec![0u64; n];
                'outer: loop {
                    let ok = (0..m).all(|i| {
                        let s = (0..n).fold(BigRational::zero(), |acc, j| {
                            acc + &self.a_val[i * n + j] * BigRational::from_integer(BigInt::from(q[j]))
                        });
                        (s - &v01[i]).is_integer()
                    });
                    if ok {
                        return Err(Error::ExactSolution);
                    }
                    for slot in q.iter_mut() {
                        *slot += 1;
                        if *slot < lu {
                            continue 'outer;
                        }
                        *slot = 0;
                    }
                    break;
                }
            } else if n == 1 && m == 1 && v01[0].is_integer() && v02[0].is_integer() {
                return Err(Error::ExactSolution);
            }
        }
        Ok(())
    }

    /// `G n + v_offset`.
    pub fn vector(&self, n: &[BigInt], offset: Option<usize>) -> SplitVector {
        let mut coords = mat_vec(&self.generator, &to_rationals(n));
        if let Some(k) = offset {
            for (x, o) in coords.iter_mut().zip(&self.spec.offsets[k]) {
                *x += o;
            }
        }
        SplitVector::new(self.spec.shape, coords).expect("shape")
    }

    /// Bound on the error of `p_1` coming from the approximation of `A`.
    pub fn p1_error_bound(&self, v: &SplitVector) -> BigRational {
        if self.a_err.is_zero() {
            return BigRational::zero();
        }
        let l1: BigRational = v.p2().iter().map(|x| x.abs()).fold(BigRational::zero(), |a, b| a + b);
        &self.a_err * (l1 + BigRational::one())
    }

    /// Frames `(T G, c0)` covering the set under `transform`.
    pub(crate) fn frames(&self, transform: Option<&Transform>) -> Vec<(Mat, Option<Vec<BigRational>>)> {
        let gen = match transform {
            Some(t) => mat_mul(t.rows(), &self.generator),
            None => self.generator.clone(),
        };
        if self.offsets_c0.is_empty() {
            vec![(gen, None)]
        } else {
            self.offsets_c0.iter().map(|c| (gen.clone(), Some(c.clone()))).collect()
        }
    }

    fn accept(&self, n: &[BigInt]) -> bool {
        !self.spec.primitive_only || gcd_is_one(n)
    }
}

impl DiscreteSetProvider for LatticeProvider {
    fn shape(&self) -> SplitShape {
        self.spec.shape
    }

    fn enumerate_with_multiplicity(
        &self,
        transform: Option<&Transform>,
        radius: f64,
    ) -> Result<Vec<(SplitVector, usize)>> {
        let r2 = rat_from_f64(radius * radius);
        let mut pts = Vec::new();
        for (k, (gen, c0)) in self.frames(transform).into_iter().enumerate() {
            let frame = reduce_frame(&gen, c0.as_deref(), None)?;
            let hits = frame
                .enumerate(radius * 2f64.sqrt(), 50_000_000)
                .ok_or_else(|| Error::InvalidArgument("enumeration budget exceeded".into()))?;
            let offset = c0.as_ref().map(|_| k);
            for h in hits {
                if !self.accept(&h.n) {
                    continue;
                }
                let mut v = self.vector(&h.n, offset);
                if let Some(t) = transform {
                    v = t.apply(&v);
                }
                if v.split_norm_sq() <= r2 {
                    pts.push(v);
                }
            }
        }
        Ok(sorted_unique(pts))
    }

    fn shortest_vector(&self, transform: Option<&Transform>) -> Result<SplitVector> {
        let mut best: Option<SplitVector> = None;
        for (k, (gen, c0)) in self.frames(transform).into_iter().enumerate() {
            let frame = reduce_frame(&gen, c0.as_deref(), None)?;
            let ub = frame.upper_bound();
            let hits = frame
                .enumerate(ub * 2f64.sqrt() * (1.0 + 1e-9), 50_000_000)
                .ok_or_else(|| Error::InvalidArgument("enumeration budget exceeded".into()))?;
            let offset = c0.as_ref().map(|_| k);
            for h in hits {
                if !self.accept(&h.n) {
                    continue;
                }
                let mut v = self.vector(&h.n, offset);
                if let Some(t) = transform {
                    v = t.apply(&v);
                }
                if best.as_ref().is_none_or(|b| sort_key(&v) < sort_key(b)) {
                    best = Some(v);
                }
            }
        }
        best.ok_or(Error::EmptySet)
    }
}
