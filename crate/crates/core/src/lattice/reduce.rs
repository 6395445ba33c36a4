use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::linalg::dot;
use crate::arithmetic::{rat_from_f64, rational_to_f64};
use crate::error::{Error, Result};

/// An LLL-reduced basis together with its Gram–Schmidt data and the integer
/// change of basis from the input.
#[derive(Clone, Debug)]
pub struct ReducedBasis {
    /// Reduced vectors `b_i`.
    pub basis: Vec<Vec<BigRational>>,
    /// `b_i = sum_j transform[i][j] * input_j`; unimodular.
    pub transform: Vec<Vec<BigInt>>,
    /// `mu[i][j]` for `j < i`.
    pub mu: Vec<Vec<BigRational>>,
    /// `||b_i*||^2`.
    pub gs_norms_sq: Vec<BigRational>,
    pub delta: BigRational,
}

impl ReducedBasis {
    pub fn gs_norms_sq_f64(&self) -> Vec<f64> {
        self.gs_norms_sq.iter().map(rational_to_f64).collect()
    }

    pub fn mu_f64(&self) -> Vec<Vec<f64>> {
        self.mu.iter().map(|r| r.iter().map(rational_to_f64).collect()).collect()
    }

    pub fn first_norm_sq(&self) -> BigRational {
        dot(&self.basis[0], &self.basis[0])
    }
}

fn gram_schmidt(b: &[Vec<BigRational>]) -> Result<(Vec<Vec<BigRational>>, Vec<BigRational>)> {
    let d = b.len();
    let mut star: Vec<Vec<BigRational>> = Vec::with_capacity(d);
    let mut mu = vec![vec![BigRational::zero(); d]; d];
    let mut norms = Vec::with_capacity(d);
    for i in 0..d {
        let mut v = b[i].clone();
        for j in 0..i {
            let m = dot(&b[i], &star[j]) / &norms[j];
            for (x, s) in v.iter_mut().zip(&star[j]) {
                *x -= &m * s;
            }
            mu[i][j] = m;
        }
        let n = dot(&v, &v);
        if n.is_zero() {
            return Err(Error::RankDeficient);
        }
        norms.push(n);
        star.push(v);
    }
    Ok((mu, norms))
}

fn round(x: &BigRational) -> BigInt {
    (x + BigRational::new(BigInt::one(), BigInt::from(2))).floor().to_integer()
}

/// Exact LLL reduction with parameter `delta ∈ (1/4, 1)`.
pub fn lll_reduce(basis: &[Vec<BigRational>], delta: f64) -> Result<ReducedBasis> {
    if !(delta > 0.25 && delta < 1.0) {
        return Err(Error::InvalidArgument(format!("LLL delta {delta} outside (1/4, 1)")));
    }
    let d = basis.len();
    if d == 0 || basis.iter().any(|v| v.len() != basis[0].len()) {
        return Err(Error::InvalidArgument("basis vectors must share a dimension".into()));
    }
    let delta = rat_from_f64(delta);
    let mut b = basis.to_vec();
    let mut u: Vec<Vec<BigInt>> =
        (0..d).map(|i| (0..d).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect()).collect();
    let (mut mu, mut norms) = gram_schmidt(&b)?;
    let half = BigRational::new(BigInt::one(), BigInt::from(2));
    let mut k = 1;
    while k < d {
        for j in (0..k).rev() {
            if mu[k][j].abs() > half {
                let q = round(&mu[k][j]);
                let qr = BigRational::from_integer(q.clone());
                let (bj, uj) = (b[j].clone(), u[j].clone());
                for (x, y) in b[k].iter_mut().zip(&bj) {
                    *x -= &qr * y;
                }
                for (x, y) in u[k].iter_mut().zip(&uj) {
                    *x -= &q * y;
                }
                for l in 0..j {
                    let delta_mu = &qr * &mu[j][l];
                    mu[k][l] -= delta_mu;
                }
                mu[k][j] -= &qr;
            }
        }
        let lhs = &norms[k];
        let rhs = (&delta - &mu[k][k - 1] * &mu[k][k - 1]) * &norms[k - 1];
        if *lhs >= rhs {
            k += 1;
        } else {
            b.swap(k, k - 1);
            u.swap(k, k - 1);
            let gs = gram_schmidt(&b)?;
            mu = gs.0;
            norms = gs.1;
            k = (k - 1).max(1);
        }
    }
    Ok(ReducedBasis { basis: b, transform: u, mu, gs_norms_sq: norms, delta })
}

/// Lagrange–Gauss reduction of a planar basis: returns `(b1, b2)` with
/// `||b1|| <= ||b2||` and `|<b1,b2>| <= ||b1||^2 / 2`.
pub fn gauss_reduce(
    b1: &[BigRational],
    b2: &[BigRational],
) -> Result<(Vec<BigRational>, Vec<BigRational>)> {
    let (mut u, mut v) = (b1.to_vec(), b2.to_vec());
    if dot(&u, &u) > dot(&v, &v) {
        std::mem::swap(&mut u, &mut v);
    }
    loop {
        let uu = dot(&u, &u);
        if uu.is_zero() {
            return Err(Error::RankDeficient);
        }
        let q = BigRational::from_integer(round(&(dot(&u, &v) / &uu)));
        for (x, y) in v.iter_mut().zip(&u) {
            *x -= &q * y;
        }
        if dot(&v, &v) >= uu {
            return Ok((u, v));
        }
        std::mem::swap(&mut u, &mut v);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arithmetic::rat;

    fn ints(rows: &[&[i64]]) -> Vec<Vec<BigRational>> {
        rows.iter().map(|r| r.iter().map(|&x| rat(x, 1)).collect()).collect()
    }

    #[test]
    fn identity_unchanged() {
        let b = ints(&[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1]]);
        let r = lll_reduce(&b, 0.99).unwrap();
        assert_eq!(r.basis, b);
    }

    #[test]
    fn skewed_planar_basis() {
        let b = ints(&[&[1, 0], &[1_000_000, 1]]);
        let r = lll_reduce(&b, 0.99).unwrap();
        let (g1, _) = gauss_reduce(&b[0], &b[1]).unwrap();
        assert_eq!(dot(&r.basis[0], &r.basis[0]), dot(&g1, &g1));
        // both reduced vectors are unit vectors
        assert!(r.basis.iter().all(|v| dot(v, v) == rat(1, 1)));
    }

    #[test]
    fn rank_deficiency_and_delta() {
        assert!(matches!(lll_reduce(&ints(&[&[1, 2], &[2, 4]]), 0.99), Err(Error::RankDeficient)));
        assert!(lll_reduce(&ints(&[&[1, 0], &[0, 1]]), 0.2).is_err());
    }
}
