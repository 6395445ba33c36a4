use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::fmt;

use crate::arithmetic::{ln_abs, rat_from_f64, rational_to_f64};
use crate::{Error, Result};

/// A point `re + i·im` of the upper half-plane with exact rational coordinates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HalfPlanePoint {
    pub re: BigRational,
    pub im: BigRational,
}

impl HalfPlanePoint {
    pub fn new(re: BigRational, im: BigRational) -> Result<Self> {
        if !im.is_positive() {
            return Err(Error::InvalidArgument("imaginary part must be positive".into()));
        }
        Ok(HalfPlanePoint { re, im })
    }

    pub fn from_f64(re: f64, im: f64) -> Result<Self> {
        if !re.is_finite() || !im.is_finite() {
            return Err(Error::InvalidArgument("non-finite coordinate".into()));
        }
        Self::new(rat_from_f64(re), rat_from_f64(im))
    }

    pub fn i() -> Self {
        HalfPlanePoint { re: BigRational::zero(), im: BigRational::one() }
    }

    pub fn to_f64(&self) -> (f64, f64) {
        (rational_to_f64(&self.re), rational_to_f64(&self.im))
    }

    pub fn ln_im(&self) -> f64 {
        ln_abs(&self.im)
    }
}

impl fmt::Display for HalfPlanePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (x, y) = self.to_f64();
        write!(f, "{x} + {y}i")
    }
}

/// An element `[[a, b], [c, d]]` of SL(2, Z).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ModularWord {
    pub a: BigInt,
    pub b: BigInt,
    pub c: BigInt,
    pub d: BigInt,
}

impl ModularWord {
    pub fn from_i64(a: i64, b: i64, c: i64, d: i64) -> Self {
        ModularWord { a: a.into(), b: b.into(), c: c.into(), d: d.into() }
    }

    pub fn identity() -> Self {
        Self::from_i64(1, 0, 0, 1)
    }

    /// `z ↦ z + k`.
    pub fn translation(k: BigInt) -> Self {
        ModularWord { a: BigInt::one(), b: k, c: BigInt::zero(), d: BigInt::one() }
    }

    /// `z ↦ -1/z`.
    pub fn inversion() -> Self {
        Self::from_i64(0, -1, 1, 0)
    }

    /// Matrix product `self · other`.
    pub fn compose(&self, o: &ModularWord) -> ModularWord {
        ModularWord {
            a: &self.a * &o.a + &self.b * &o.c,
            b: &self.a * &o.b + &self.b * &o.d,
            c: &self.c * &o.a + &self.d * &o.c,
            d: &self.c * &o.b + &self.d * &o.d,
        }
    }

    pub fn inverse(&self) -> ModularWord {
        ModularWord { a: self.d.clone(), b: -&self.b, c: -&self.c, d: self.a.clone() }
    }

    pub fn determinant(&self) -> BigInt {
        &self.a * &self.d - &self.b * &self.c
    }

    /// Entries reduced mod 2, as `[a, b, c, d]`.
    pub fn mod2(&self) -> [u8; 4] {
        let m = |x: &BigInt| u8::from(x.is_odd());
        [m(&self.a), m(&self.b), m(&self.c), m(&self.d)]
    }

    pub fn apply(&self, z: &HalfPlanePoint) -> HalfPlanePoint {
        let (a, b, c, d) = (q(&self.a), q(&self.b), q(&self.c), q(&self.d));
        mobius(&a, &b, &c, &d, z)
    }

    pub fn apply_f64(&self, z: (f64, f64)) -> (f64, f64) {
        let f = |x: &BigInt| x.to_f64().unwrap_or(f64::NAN);
        mobius_f64(f(&self.a), f(&self.b), f(&self.c), f(&self.d), z)
    }
}

impl fmt::Display for ModularWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[[{}, {}], [{}, {}]]", self.a, self.b, self.c, self.d)
    }
}

fn q(x: &BigInt) -> BigRational {
    BigRational::from_integer(x.clone())
}

/// `(a z + b)/(c z + d)` for real coefficients with `ad - bc > 0`.
fn mobius(
    a: &BigRational,
    b: &BigRational,
    c: &BigRational,
    d: &BigRational,
    z: &HalfPlanePoint,
) -> HalfPlanePoint {
    let nr = a * &z.re + b;
    let dr = c * &z.re + d;
    let y2 = &z.im * &z.im;
    let den = &dr * &dr + c * c * &y2;
    let re = (&nr * &dr + a * c * &y2) / &den;
    let im = (a * d - b * c) * &z.im / den;
    HalfPlanePoint { re, im }
}

pub(crate) fn mobius_f64(a: f64, b: f64, c: f64, d: f64, (x, y): (f64, f64)) -> (f64, f64) {
    let nr = a * x + b;
    let dr = c * x + d;
    let den = dr * dr + c * c * y * y;
    ((nr * dr + a * c * y * y) / den, (a * d - b * c) * y / den)
}

/// An element of SL(2, R) with exact rational entries.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupElement {
    pub a: BigRational,
    pub b: BigRational,
    pub c: BigRational,
    pub d: BigRational,
}

impl GroupElement {
    pub fn new(a: BigRational, b: BigRational, c: BigRational, d: BigRational) -> Result<Self> {
        if &a * &d - &b * &c != BigRational::one() {
            return Err(Error::InvalidArgument("determinant must be exactly 1".into()));
        }
        Ok(GroupElement { a, b, c, d })
    }

    pub fn identity() -> Self {
        GroupElement {
            a: BigRational::one(),
            b: BigRational::zero(),
            c: BigRational::zero(),
            d: BigRational::one(),
        }
    }

    /// `diag(λ, 1/λ)` with `λ` the rational nearest `e^{t/2}`; determinant stays exactly 1.
    pub fn geodesic(t: f64) -> Self {
        let lambda = rat_from_f64((t / 2.0).exp());
        Self::diagonal(lambda)
    }

    pub fn diagonal(lambda: BigRational) -> Self {
        let inv = lambda.recip();
        GroupElement { a: lambda, b: BigRational::zero(), c: BigRational::zero(), d: inv }
    }

    /// The lower-triangular unipotent `[[1, 0], [s, 1]]`.
    pub fn horocycle(s: BigRational) -> Self {
        GroupElement { a: BigRational::one(), b: BigRational::zero(), c: s, d: BigRational::one() }
    }

    /// `[[1, α], [0, 1]]`, the embedding of a real number.
    pub fn embedding(alpha: BigRational) -> Self {
        GroupElement { a: BigRational::one(), b: alpha, c: BigRational::zero(), d: BigRational::one() }
    }

    pub fn from_word(w: &ModularWord) -> Self {
        GroupElement { a: q(&w.a), b: q(&w.b), c: q(&w.c), d: q(&w.d) }
    }

    pub fn mul(&self, o: &GroupElement) -> GroupElement {
        GroupElement {
            a: &self.a * &o.a + &self.b * &o.c,
            b: &self.a * &o.b + &self.b * &o.d,
            c: &self.c * &o.a + &self.d * &o.c,
            d: &self.c * &o.b + &self.d * &o.d,
        }
    }

    pub fn inverse(&self) -> GroupElement {
        GroupElement { a: self.d.clone(), b: -&self.b, c: -&self.c, d: self.a.clone() }
    }

    /// The point `g^{-1}·i` representing the coset `gΓ` in the upper half-plane.
    pub fn point(&self) -> HalfPlanePoint {
        let inv = self.inverse();
        mobius(&inv.a, &inv.b, &inv.c, &inv.d, &HalfPlanePoint::i())
    }

    /// `ρ(g)u = (g^{-1})^T u` for an integer covector `u`.
    pub fn contragredient(&self, u: (&BigInt, &BigInt)) -> (BigRational, BigRational) {
        let (u1, u2) = (q(u.0), q(u.1));
        (&self.d * &u1 - &self.c * &u2, -&self.b * &u1 + &self.a * &u2)
    }

    pub fn to_f64(&self) -> [[f64; 2]; 2] {
        [
            [rational_to_f64(&self.a), rational_to_f64(&self.b)],
            [rational_to_f64(&self.c), rational_to_f64(&self.d)],
        ]
    }
}

/// Reduces `z` into the standard fundamental domain `|Re z| ≤ 1/2, |z| ≥ 1`.
/// Returns `(z_red, w)` with `z_red = w·z`.
pub fn reduce_fundamental_domain(z: &HalfPlanePoint) -> (HalfPlanePoint, ModularWord) {
    let half = BigRational::new(BigInt::one(), BigInt::from(2));
    let mut x = z.re.clone();
    let mut y = z.im.clone();
    let mut w = ModularWord::identity();
    loop {
        let k = (&x + &half).floor();
        if !k.is_zero() {
            x -= &k;
            w = ModularWord::translation(-k.to_integer()).compose(&w);
        }
        let n = &x * &x + &y * &y;
        if n < BigRational::one() {
            x = -x / &n;
            y /= n;
            w = ModularWord::inversion().compose(&w);
        } else {
            break;
        }
    }
    (HalfPlanePoint { re: x, im: y }, w)
}

/// Floating-point reduction for points with moderate coordinates.
pub fn reduce_f64(z: (f64, f64)) -> ((f64, f64), ModularWord) {
    let (mut x, mut y) = z;
    let mut w = ModularWord::identity();
    for _ in 0..10_000 {
        let k = (x + 0.5).floor();
        if k != 0.0 {
            x -= k;
            w = ModularWord::translation(BigInt::from(k as i64)).inverse().compose(&w);
        }
        let n = x * x + y * y;
        if n < 1.0 - 1e-15 {
            x = -x / n;
            y /= n;
            w = ModularWord::inversion().compose(&w);
        } else {
            break;
        }
    }
    ((x, y), w)
}

/// `arccosh(1 + u)` for `u ≥ 0`, accurate for tiny and huge `u`.
pub(crate) fn arccosh1p(u: f64) -> f64 {
    if u > 1e15 {
        u.ln() + std::f64::consts::LN_2
    } else {
        (u + (u * (u + 2.0)).sqrt()).ln_1p()
    }
}

/// Hyperbolic distance in the upper half-plane (curvature -1).
pub fn hyperbolic_distance(z: &HalfPlanePoint, w: &HalfPlanePoint) -> f64 {
    let dx = &z.re - &w.re;
    let dy = &z.im - &w.im;
    let u = (&dx * &dx + &dy * &dy) / (BigRational::from_integer(2.into()) * &z.im * &w.im);
    let uf = rational_to_f64(&u);
    if uf.is_finite() && uf < 1e300 {
        arccosh1p(uf)
    } else {
        ln_abs(&u) + std::f64::consts::LN_2
    }
}

pub(crate) fn hyperbolic_distance_f64((x, y): (f64, f64), (x2, y2): (f64, f64)) -> f64 {
    let u = ((x - x2).powi(2) + (y - y2).powi(2)) / (2.0 * y * y2);
    arccosh1p(u)
}

/// Rounds `r` to the nearest multiple of `2^{-bits}`.
pub(crate) fn round_dyadic(r: &BigRational, bits: usize) -> BigRational {
    let scale = BigInt::one() << bits;
    let n = (r * BigRational::from_integer(scale.clone())).round().to_integer();
    BigRational::new(n, scale)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arithmetic::rat;

    #[test]
    fn translation_by_integer() {
        let z = HalfPlanePoint::new(rat(5, 1), rat(1, 1)).unwrap();
        let (r, w) = reduce_fundamental_domain(&z);
        assert_eq!(r, HalfPlanePoint::i());
        assert_eq!(w, ModularWord::translation(BigInt::from(-5)));
    }

    #[test]
    fn inversion_of_half_i() {
        let z = HalfPlanePoint::new(rat(0, 1), rat(1, 2)).unwrap();
        let (r, w) = reduce_fundamental_domain(&z);
        assert_eq!(r.im, rat(2, 1));
        assert_eq!(r.re, rat(0, 1));
        assert_eq!(w, ModularWord::inversion());
    }

    #[test]
    fn reduction_lands_in_domain() {
        let z = HalfPlanePoint::new(rat(3, 10), rat(1, 25)).unwrap();
        let (r, w) = reduce_fundamental_domain(&z);
        let (x, y) = r.to_f64();
        assert!(x.abs() <= 0.5 && x * x + y * y >= 1.0);
        assert!(y >= 3f64.sqrt() / 2.0);
        assert_eq!(w.determinant(), BigInt::one());
        assert_eq!(w.apply(&z), r);
        let (rf, _) = reduce_f64((0.3, 0.04));
        assert!((rf.0 - x).abs() < 1e-12 && (rf.1 - y).abs() < 1e-12);
    }

    #[test]
    fn distances() {
        let i = HalfPlanePoint::i();
        let far = HalfPlanePoint::new(rat(0, 1), rat(1 << 20, 1)).unwrap();
        assert!((hyperbolic_distance(&i, &far) - 20.0 * std::f64::consts::LN_2).abs() < 1e-9);
        assert_eq!(hyperbolic_distance(&i, &i), 0.0);
    }

    #[test]
    fn point_and_contragredient() {
        let g = GroupElement::diagonal(rat(1, 4));
        // g^{-1}·i = 16 i and ρ(g)(0,1) = (0, 1/4)
        assert_eq!(g.point().im, rat(16, 1));
        let v = g.contragredient((&BigInt::zero(), &BigInt::one()));
        assert_eq!(v, (rat(0, 1), rat(1, 4)));
    }
}
