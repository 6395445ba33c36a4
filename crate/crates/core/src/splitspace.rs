//! The `(m, n)` split of `R^d`: block norms, the diagonal flow `g_t`, the
//! horospherical shears `h_B`, the projection `Π` and per-vector optimal
//! time and shear.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Pow, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::arithmetic::{ln_abs, rat_from_f64, rational_to_f64, sqrt_f64};
use crate::error::{Error, Result};

/// Block sizes `m` (horizontal) and `n` (vertical), `d = m + n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SplitShape {
    pub m: usize,
    pub n: usize,
}

impl SplitShape {
    pub fn new(m: usize, n: usize) -> Result<Self> {
        if m == 0 || n == 0 {
            return Err(Error::InvalidArgument(format!("split shape ({m},{n}) needs m, n >= 1")));
        }
        Ok(SplitShape { m, n })
    }

    pub const fn planar() -> Self {
        SplitShape { m: 1, n: 1 }
    }

    pub fn d(&self) -> usize {
        self.m + self.n
    }
}

impl fmt::Display for SplitShape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.m, self.n)
    }
}

fn norm_sq(xs: &[BigRational]) -> BigRational {
    xs.iter().fold(BigRational::zero(), |acc, x| acc + x * x)
}

fn sqrt_of(r: &BigRational) -> f64 {
    sqrt_f64(r)
}

/// A point of `R^m x R^n` with exact coordinates.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SplitVector {
    shape: SplitShape,
    coords: Vec<BigRational>,
}

impl SplitVector {
    pub fn new(shape: SplitShape, coords: Vec<BigRational>) -> Result<Self> {
        if coords.len() != shape.d() {
            return Err(Error::InvalidArgument(format!(
                "expected {} coordinates for shape {shape}, got {}",
                shape.d(),
                coords.len()
            )));
        }
        Ok(SplitVector { shape, coords })
    }

    /// Convenience constructor from integer ratios.
    pub fn from_ratios(shape: SplitShape, coords: &[(i64, i64)]) -> Result<Self> {
        Self::new(shape, coords.iter().map(|&(p, q)| crate::arithmetic::rat(p, q)).collect())
    }

    pub fn shape(&self) -> SplitShape {
        self.shape
    }

    pub fn coords(&self) -> &[BigRational] {
        &self.coords
    }

    pub fn p1(&self) -> &[BigRational] {
        &self.coords[..self.shape.m]
    }

    pub fn p2(&self) -> &[BigRational] {
        &self.coords[self.shape.m..]
    }

    pub fn p1_norm_sq(&self) -> BigRational {
        norm_sq(self.p1())
    }

    pub fn p2_norm_sq(&self) -> BigRational {
        norm_sq(self.p2())
    }

    pub fn p1_norm(&self) -> f64 {
        sqrt_of(&self.p1_norm_sq())
    }

    pub fn p2_norm(&self) -> f64 {
        sqrt_of(&self.p2_norm_sq())
    }

    /// `ln ||p_1||`, finite even when the norm underflows `f64`.
    pub fn ln_p1(&self) -> f64 {
        0.5 * ln_abs(&self.p1_norm_sq())
    }

    pub fn ln_p2(&self) -> f64 {
        0.5 * ln_abs(&self.p2_norm_sq())
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(Zero::is_zero)
    }

    pub fn is_vertical(&self) -> bool {
        self.p1().iter().all(Zero::is_zero)
    }

    pub fn is_horizontal(&self) -> bool {
        self.p2().iter().all(Zero::is_zero)
    }

    /// Exact square of the split norm.
    pub fn split_norm_sq(&self) -> BigRational {
        let (a, b) = (self.p1_norm_sq(), self.p2_norm_sq());
        if a > b {
            a
        } else {
            b
        }
    }

    pub fn euclidean_norm(&self) -> f64 {
        sqrt_of(&norm_sq(&self.coords))
    }

    pub fn neg(&self) -> Self {
        SplitVector { shape: self.shape, coords: self.coords.iter().map(|x| -x).collect() }
    }

    pub fn to_f64(&self) -> Vec<f64> {
        self.coords.iter().map(rational_to_f64).collect()
    }
}

impl fmt::Display for SplitVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let show = |xs: &[BigRational]| xs.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", ");
        write!(f, "({} | {})", show(self.p1()), show(self.p2()))
    }
}

/// `max(||p_1||, ||p_2||)`.
pub fn split_norm(v: &SplitVector) -> Result<f64> {
    if v.is_zero() {
        return Err(Error::ZeroVector);
    }
    Ok(v.p1_norm().max(v.p2_norm()))
}

/// `Π(v) = (||p_1||, ||p_2||)`.
pub fn project_mn(v: &SplitVector) -> Result<(f64, f64)> {
    if v.is_zero() {
        return Err(Error::ZeroVector);
    }
    Ok((v.p1_norm(), v.p2_norm()))
}

/// `g` with `e^{t/d} = a`: `p_1 -> a^n p_1`, `p_2 -> a^{-m} p_2`. Exact.
pub fn apply_diagonal(v: &SplitVector, a: &BigRational) -> SplitVector {
    let SplitShape { m, n } = v.shape;
    let up: BigRational = Pow::pow(a, n);
    let down: BigRational = Pow::pow(a.recip(), m);
    let coords = v
        .coords
        .iter()
        .enumerate()
        .map(|(i, x)| if i < m { x * &up } else { x * &down })
        .collect();
    SplitVector { shape: v.shape, coords }
}

/// `g_t v`. The factor `e^{t/d}` is rounded to the nearest `f64` and then
/// applied exactly; use [`apply_diagonal`] when the factor is rational.
pub fn apply_geodesic(v: &SplitVector, t: f64) -> SplitVector {
    if t == 0.0 {
        return v.clone();
    }
    let a = (t / v.shape.d() as f64).exp();
    apply_diagonal(v, &rat_from_f64(a))
}

/// An `n x m` shear block `B`, row-major.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ShearMatrix {
    shape: SplitShape,
    entries: Vec<BigRational>,
}

impl ShearMatrix {
    pub fn new(shape: SplitShape, entries: Vec<BigRational>) -> Result<Self> {
        if entries.len() != shape.m * shape.n {
            return Err(Error::InvalidArgument(format!(
                "shear for shape {shape} needs {} entries",
                shape.m * shape.n
            )));
        }
        Ok(ShearMatrix { shape, entries })
    }

    pub fn zero(shape: SplitShape) -> Self {
        ShearMatrix { shape, entries: vec![BigRational::zero(); shape.m * shape.n] }
    }

    /// The `1 x 1` shear `h_s`: lower-left entry `s`.
    pub fn scalar(s: BigRational) -> Self {
        ShearMatrix { shape: SplitShape::planar(), entries: vec![s] }
    }

    pub fn shape(&self) -> SplitShape {
        self.shape
    }

    pub fn entries(&self) -> &[BigRational] {
        &self.entries
    }

    pub fn entry(&self, row: usize, col: usize) -> &BigRational {
        &self.entries[row * self.shape.m + col]
    }

    pub fn frobenius_sq(&self) -> BigRational {
        norm_sq(&self.entries)
    }

    pub fn norm(&self) -> f64 {
        sqrt_of(&self.frobenius_sq())
    }

    pub fn scaled(&self, c: &BigRational) -> Self {
        ShearMatrix { shape: self.shape, entries: self.entries.iter().map(|x| x * c).collect() }
    }
}

/// `h_B v = (p_1, B p_1 + p_2)`.
pub fn apply_shear(v: &SplitVector, h: &ShearMatrix) -> Result<SplitVector> {
    if v.shape != h.shape {
        return Err(Error::ShapeMismatch(h.shape.m, h.shape.n, v.shape.m, v.shape.n));
    }
    let SplitShape { m, n } = v.shape;
    let mut coords = v.coords.clone();
    for i in 0..n {
        let mut acc = v.coords[m + i].clone();
        for j in 0..m {
            acc += h.entry(i, j) * &v.coords[j];
        }
        coords[m + i] = acc;
    }
    Ok(SplitVector { shape: v.shape, coords })
}

/// Balancing time `t* = ln(||p_2|| / ||p_1||)` and the minimal split norm
/// `||p_1||^{m/d} ||p_2||^{n/d}` along the orbit `g_t v`.
pub fn optimal_time(v: &SplitVector) -> Result<(f64, f64)> {
    if v.is_vertical() {
        return Err(Error::Vertical);
    }
    if v.is_horizontal() {
        return Err(Error::Horizontal);
    }
    let (lx, ly) = (v.ln_p1(), v.ln_p2());
    let d = v.shape.d() as f64;
    let ln_min = (v.shape.m as f64 * lx + v.shape.n as f64 * ly) / d;
    Ok((ly - lx, ln_min.exp()))
}

/// The least-norm shear killing `p_2`: rows `-(y_i / ||p_1||^2) p_1`.
#[derive(Clone, Debug, PartialEq)]
pub struct OptimalShear {
    pub shear: ShearMatrix,
    /// `||B*|| = ||p_2|| / ||p_1||`.
    pub s_star: f64,
    /// `||p_1||`, the split norm of `h_{B*} v`.
    pub residual: f64,
}

pub fn optimal_shear(v: &SplitVector) -> Result<OptimalShear> {
    if v.is_vertical() {
        return Err(Error::Vertical);
    }
    let SplitShape { m, n } = v.shape;
    let p1sq = v.p1_norm_sq();
    let mut entries = Vec::with_capacity(m * n);
    for y in v.p2() {
        let c = -(y / &p1sq);
        entries.extend(v.p1().iter().map(|x| &c * x));
    }
    let shear = ShearMatrix { shape: v.shape, entries };
    let s_star = if v.is_horizontal() { 0.0 } else { (v.ln_p2() - v.ln_p1()).exp() };
    Ok(OptimalShear { shear, s_star, residual: v.p1_norm() })
}

/// Integer-power helper for exact scale factors `2^k`.
pub fn pow2(k: i64) -> BigRational {
    let b = BigInt::one() << k.unsigned_abs() as usize;
    if k >= 0 {
        BigRational::from_integer(b)
    } else {
        BigRational::new(BigInt::one(), b)
    }
}

/// `|x|` for exact rationals, re-exported for block computations.
pub fn abs(x: &BigRational) -> BigRational {
    x.abs()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arithmetic::rat;

    fn v(m: usize, n: usize, c: &[(i64, i64)]) -> SplitVector {
        SplitVector::from_ratios(SplitShape::new(m, n).unwrap(), c).unwrap()
    }

    #[test]
    fn norms() {
        assert_eq!(split_norm(&v(2, 1, &[(3, 1), (4, 1), (12, 1)])).unwrap(), 12.0);
        assert_eq!(split_norm(&v(1, 2, &[(1, 1), (0, 1), (0, 1)])).unwrap(), 1.0);
        assert_eq!(split_norm(&v(1, 1, &[(1, 8), (4, 1)])).unwrap(), 4.0);
        assert_eq!(project_mn(&v(2, 1, &[(3, 1), (4, 1), (12, 1)])).unwrap(), (5.0, 12.0));
        assert!(matches!(split_norm(&v(1, 1, &[(0, 1), (0, 1)])), Err(Error::ZeroVector)));
    }

    #[test]
    fn geodesic() {
        let w = apply_diagonal(&v(1, 1, &[(1, 1), (1, 1)]), &rat(2, 1));
        assert_eq!(w, v(1, 1, &[(2, 1), (1, 2)]));
        let w = apply_diagonal(&v(1, 2, &[(1, 1), (1, 1), (1, 1)]), &rat(2, 1));
        assert_eq!(w, v(1, 2, &[(4, 1), (1, 2), (1, 2)]));
        let x = v(1, 1, &[(3, 7), (-2, 5)]);
        assert_eq!(apply_geodesic(&x, 0.0), x);
        let w = apply_geodesic(&v(1, 1, &[(1, 1), (1, 1)]), 2.0 * 2f64.ln());
        assert!((w.p1_norm() - 2.0).abs() < 1e-12 && (w.p2_norm() - 0.5).abs() < 1e-12);
        let (x1, y1) = project_mn(&apply_geodesic(&v(1, 1, &[(1, 1), (1, 1)]), 1.0)).unwrap();
        assert!((x1 - 0.5f64.exp()).abs() < 1e-12 && (y1 - (-0.5f64).exp()).abs() < 1e-12);
    }

    #[test]
    fn shear() {
        let x = v(1, 1, &[(1, 8), (4, 1)]);
        let w = apply_shear(&x, &ShearMatrix::scalar(rat(-32, 1))).unwrap();
        assert_eq!(w, v(1, 1, &[(1, 8), (0, 1)]));
        assert_eq!(apply_shear(&x, &ShearMatrix::zero(x.shape())).unwrap(), x);
        let b = ShearMatrix::new(SplitShape::new(2, 1).unwrap(), vec![rat(1, 1), rat(1, 1)]).unwrap();
        assert_eq!(apply_shear(&v(2, 1, &[(1, 1), (2, 1), (5, 1)]), &b).unwrap(), v(2, 1, &[(1, 1), (2, 1), (8, 1)]));
        assert!(matches!(apply_shear(&x, &b), Err(Error::ShapeMismatch(..))));
    }

    #[test]
    fn optimal_time_examples() {
        let (t, mn) = optimal_time(&v(1, 1, &[(1, 8), (4, 1)])).unwrap();
        assert!((t - 32f64.ln()).abs() < 1e-12 && (mn - 0.5f64.sqrt()).abs() < 1e-12);
        let (t, mn) = optimal_time(&v(1, 1, &[(1, 1), (-1, 1)])).unwrap();
        assert!(t.abs() < 1e-15 && (mn - 1.0).abs() < 1e-15);
        let x = v(1, 2, &[(1, 4), (2, 1), (0, 1)]);
        let (t, mn) = optimal_time(&x).unwrap();
        assert!((t - 8f64.ln()).abs() < 1e-12 && (mn - 1.0).abs() < 1e-12);
        // golden-section scan of t -> split_norm(g_t x)
        let f = |t: f64| {
            let d = 3.0;
            (x.p1_norm() * (2.0 * t / d).exp()).max(x.p2_norm() * (-t / d).exp())
        };
        let (mut a, mut b) = (-10.0, 10.0);
        let g = (5f64.sqrt() - 1.0) / 2.0;
        for _ in 0..200 {
            let (c, e) = (b - g * (b - a), a + g * (b - a));
            if f(c) < f(e) {
                b = e
            } else {
                a = c
            }
        }
        assert!((f(0.5 * (a + b)) - 1.0).abs() < 1e-6);
        assert!(matches!(optimal_time(&v(1, 1, &[(0, 1), (1, 1)])), Err(Error::Vertical)));
        assert!(matches!(optimal_time(&v(1, 1, &[(1, 1), (0, 1)])), Err(Error::Horizontal)));
    }

    #[test]
    fn optimal_shear_examples() {
        let o = optimal_shear(&v(1, 1, &[(1, 8), (4, 1)])).unwrap();
        assert_eq!(o.shear.entries(), &[rat(-32, 1)]);
        assert!((o.s_star - 32.0).abs() < 1e-12 && o.residual == 0.125);
        let o = optimal_shear(&v(1, 1, &[(3, 1), (0, 1)])).unwrap();
        assert!(o.shear.frobenius_sq().is_zero() && o.s_star == 0.0 && o.residual == 3.0);
        let x = v(2, 1, &[(3, 1), (4, 1), (10, 1)]);
        let o = optimal_shear(&x).unwrap();
        assert_eq!(o.shear.entries(), &[rat(-6, 5), rat(-8, 5)]);
        assert!((o.s_star - 2.0).abs() < 1e-12 && (o.residual - 5.0).abs() < 1e-12);
        assert!(apply_shear(&x, &o.shear).unwrap().is_horizontal());
    }
}
