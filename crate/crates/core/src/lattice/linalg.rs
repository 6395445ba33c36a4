use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::arithmetic::{rat_from_f64, rational_to_f64};
use crate::error::{Error, Result};
use crate::splitspace::{ShearMatrix, SplitShape, SplitVector};

/// Row-major exact square matrix.
pub type Mat = Vec<Vec<BigRational>>;

pub(crate) fn identity(d: usize) -> Mat {
    (0..d)
        .map(|i| (0..d).map(|j| if i == j { BigRational::one() } else { BigRational::zero() }).collect())
        .collect()
}

pub(crate) fn mat_mul(a: &Mat, b: &Mat) -> Mat {
    let (r, k, c) = (a.len(), b.len(), b[0].len());
    (0..r)
        .map(|i| {
            (0..c)
                .map(|j| (0..k).fold(BigRational::zero(), |acc, l| acc + &a[i][l] * &b[l][j]))
                .collect()
        })
        .collect()
}

pub(crate) fn mat_vec(a: &Mat, v: &[BigRational]) -> Vec<BigRational> {
    a.iter().map(|row| row.iter().zip(v).fold(BigRational::zero(), |acc, (x, y)| acc + x * y)).collect()
}

pub(crate) fn column(a: &Mat, j: usize) -> Vec<BigRational> {
    a.iter().map(|row| row[j].clone()).collect()
}

/// Exact determinant by fraction-preserving elimination.
pub(crate) fn determinant(a: &Mat) -> BigRational {
    let d = a.len();
    let mut m = a.clone();
    let mut det = BigRational::one();
    for col in 0..d {
        let Some(piv) = (col..d).find(|&r| !m[r][col].is_zero()) else {
            return BigRational::zero();
        };
        if piv != col {
            m.swap(piv, col);
            det = -det;
        }
        det *= &m[col][col];
        for r in col + 1..d {
            if m[r][col].is_zero() {
                continue;
            }
            let f = &m[r][col] / &m[col][col];
            for c in col..d {
                let delta = &f * &m[col][c];
                m[r][c] -= delta;
            }
        }
    }
    det
}

/// Solves `a x = b` exactly; `a` must be invertible.
pub(crate) fn solve(a: &Mat, b: &[BigRational]) -> Result<Vec<BigRational>> {
    let d = a.len();
    let mut m: Vec<Vec<BigRational>> =
        a.iter().zip(b).map(|(row, bi)| row.iter().cloned().chain(std::iter::once(bi.clone())).collect()).collect();
    for col in 0..d {
        let piv = (col..d).find(|&r| !m[r][col].is_zero()).ok_or(Error::RankDeficient)?;
        m.swap(piv, col);
        let p = m[col][col].clone();
        for c in col..=d {
            m[col][c] = &m[col][c] / &p;
        }
        for r in 0..d {
            if r != col && !m[r][col].is_zero() {
                let f = m[r][col].clone();
                for c in col..=d {
                    let delta = &f * &m[col][c];
                    m[r][c] -= delta;
                }
            }
        }
    }
    Ok(m.into_iter().map(|row| row[d].clone()).collect())
}

pub(crate) fn dot(a: &[BigRational], b: &[BigRational]) -> BigRational {
    a.iter().zip(b).fold(BigRational::zero(), |acc, (x, y)| acc + x * y)
}

pub(crate) fn to_rationals(v: &[BigInt]) -> Vec<BigRational> {
    v.iter().map(|x| BigRational::from_integer(x.clone())).collect()
}

pub(crate) fn gcd_is_one(v: &[BigInt]) -> bool {
    use num_integer::Integer;
    let g = v.iter().fold(BigInt::zero(), |g, x| g.gcd(x));
    g.is_one()
}

/// An exact linear map of `R^d`, applied to discrete sets before enumeration.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Transform {
    rows: Mat,
}

impl Transform {
    pub fn new(rows: Mat) -> Result<Self> {
        let d = rows.len();
        if d == 0 || rows.iter().any(|r| r.len() != d) {
            return Err(Error::InvalidArgument("transform must be square".into()));
        }
        Ok(Transform { rows })
    }

    pub fn identity(d: usize) -> Self {
        Transform { rows: identity(d) }
    }

    /// Rows given as floats, converted exactly.
    pub fn from_f64(rows: &[Vec<f64>]) -> Result<Self> {
        Self::new(rows.iter().map(|r| r.iter().map(|&x| rat_from_f64(x)).collect()).collect())
    }

    /// `g` with `e^{t/d} = a`.
    pub fn diagonal(shape: SplitShape, a: &BigRational) -> Self {
        use num_traits::Pow;
        let up: BigRational = Pow::pow(a, shape.n);
        let down: BigRational = Pow::pow(a.recip(), shape.m);
        let mut rows = identity(shape.d());
        for (i, row) in rows.iter_mut().enumerate() {
            row[i] = if i < shape.m { up.clone() } else { down.clone() };
        }
        Transform { rows }
    }

    /// `g_t` with each diagonal factor rounded to `f64`.
    pub fn geodesic(shape: SplitShape, t: f64) -> Self {
        let d = shape.d() as f64;
        let mut rows = identity(shape.d());
        for (i, row) in rows.iter_mut().enumerate() {
            let e = if i < shape.m { shape.n as f64 * t / d } else { -(shape.m as f64) * t / d };
            row[i] = rat_from_f64(e.exp());
        }
        Transform { rows }
    }

    pub fn shear(h: &ShearMatrix) -> Self {
        let shape = h.shape();
        let mut rows = identity(shape.d());
        for i in 0..shape.n {
            for j in 0..shape.m {
                rows[shape.m + i][j] = h.entry(i, j).clone();
            }
        }
        Transform { rows }
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &Mat {
        &self.rows
    }

    /// `self ∘ other`.
    pub fn then_after(&self, other: &Transform) -> Transform {
        Transform { rows: mat_mul(&self.rows, &other.rows) }
    }

    pub fn apply(&self, v: &SplitVector) -> SplitVector {
        SplitVector::new(v.shape(), mat_vec(&self.rows, v.coords())).expect("dimension preserved")
    }

    pub fn to_f64(&self) -> Vec<Vec<f64>> {
        self.rows.iter().map(|r| r.iter().map(rational_to_f64).collect()).collect()
    }

    pub fn determinant(&self) -> BigRational {
        determinant(&self.rows)
    }
}
