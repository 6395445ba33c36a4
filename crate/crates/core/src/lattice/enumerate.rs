use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use super::linalg::{column, solve, Mat};
use super::reduce::lll_reduce;
use crate::arithmetic::rational_to_f64;
use crate::error::Result;

pub(crate) const LLL_DELTA: f64 = 0.99;

/// The set `{ gen * (n + c0) : n ∈ Z^d }` with an LLL-reduced basis attached.
pub(crate) struct ReducedFrame {
    /// Gram–Schmidt coefficients of the reduced basis.
    pub mu: Vec<Vec<f64>>,
    /// `||b_i*||^2`.
    pub bn: Vec<f64>,
    /// Cumulative transform: reduced `b_i = sum_j u[i][j] * gen_col_j`.
    pub u: Vec<Vec<BigInt>>,
    /// Offset in reduced coordinates, reduced into `[0, 1)`.
    pub c: Vec<f64>,
    /// `floor` of the unreduced reduced-coordinate offset.
    pub shift: Vec<BigInt>,
    pub basis_f64: Vec<Vec<f64>>,
}

/// Columns over a common denominator per component: `cols[j][k] = num[j][k] / den[k]`.
struct Columns {
    num: Vec<Vec<BigInt>>,
    den: Vec<BigInt>,
}

impl Columns {
    fn new(cols: &[Vec<BigRational>]) -> Self {
        use num_integer::Integer;
        let dim = cols[0].len();
        let den: Vec<BigInt> =
            (0..dim).map(|k| cols.iter().fold(BigInt::from(1), |l, c| l.lcm(c[k].denom()))).collect();
        let num = cols
            .iter()
            .map(|c| (0..dim).map(|k| c[k].numer() * (&den[k] / c[k].denom())).collect())
            .collect();
        Columns { num, den }
    }

    /// Rows `sum_j u[i][j] * cols[j]`.
    fn combine(&self, u: &[Vec<BigInt>]) -> Vec<Vec<BigRational>> {
        u.iter()
            .map(|row| {
                (0..self.den.len())
                    .map(|k| {
                        let n = row
                            .iter()
                            .zip(&self.num)
                            .filter(|(c, _)| !c.is_zero())
                            .fold(BigInt::zero(), |acc, (c, col)| acc + c * &col[k]);
                        BigRational::new(n, self.den[k].clone())
                    })
                    .collect()
            })
            .collect()
    }
}

fn float_gs(b: &[Vec<f64>]) -> (Vec<Vec<f64>>, Vec<f64>) {
    let d = b.len();
    let dot = |x: &[f64], y: &[f64]| x.iter().zip(y).map(|(a, c)| a * c).sum::<f64>();
    let mut star: Vec<Vec<f64>> = Vec::with_capacity(d);
    let mut mu = vec![vec![0.0; d]; d];
    let mut norms = Vec::with_capacity(d);
    for i in 0..d {
        let mut w = b[i].clone();
        for j in 0..i {
            mu[i][j] = dot(&b[i], &star[j]) / norms[j];
            for (x, s) in w.iter_mut().zip(&star[j]) {
                *x -= mu[i][j] * s;
            }
        }
        norms.push(dot(&w, &w));
        star.push(w);
    }
    (mu, norms)
}

/// Unimodular `V` with `V * basis` LLL-reduced in `f64`, or `None` when the
/// floating-point pass cannot be trusted.
fn float_lll(basis: &[Vec<BigRational>]) -> Option<Vec<Vec<i64>>> {
    let d = basis.len();
    let mut b: Vec<Vec<f64>> = basis.iter().map(|r| r.iter().map(rational_to_f64).collect()).collect();
    if b.iter().flatten().any(|x| !x.is_finite()) {
        return None;
    }
    let mut v: Vec<Vec<i64>> = (0..d).map(|i| (0..d).map(|j| (i == j) as i64).collect()).collect();
    let (mut mu, mut norms) = float_gs(&b);
    let mut k = 1;
    let mut steps = 0;
    while k < d {
        steps += 1;
        if steps > 10_000 {
            return None;
        }
        for j in (0..k).rev() {
            let q = mu[k][j].round();
            if q == 0.0 {
                continue;
            }
            if !(q.abs() < 1e15) {
                return None;
            }
            let (bj, vj) = (b[j].clone(), v[j].clone());
            for (x, y) in b[k].iter_mut().zip(&bj) {
                *x -= q * y;
            }
            for (x, y) in v[k].iter_mut().zip(&vj) {
                *x = x.checked_sub((q as i64).checked_mul(*y)?)?;
            }
            for l in 0..j {
                mu[k][l] -= q * mu[j][l];
            }
            mu[k][j] -= q;
        }
        if norms[k] >= (LLL_DELTA - mu[k][k - 1] * mu[k][k - 1]) * norms[k - 1] {
            k += 1;
        } else {
            b.swap(k, k - 1);
            v.swap(k, k - 1);
            (mu, norms) = float_gs(&b);
            if norms.iter().any(|n| !(*n > 0.0)) {
                return None;
            }
            k = (k - 1).max(1);
        }
    }
    Some(v)
}

fn int_identity(d: usize) -> Vec<Vec<BigInt>> {
    (0..d).map(|i| (0..d).map(|j| BigInt::from((i == j) as i64)).collect()).collect()
}

pub(crate) fn reduce_frame(
    gen: &Mat,
    c0: Option<&[BigRational]>,
    warm: Option<&[Vec<BigInt>]>,
) -> Result<ReducedFrame> {
    let d = gen.len();
    let cols = Columns::new(&(0..d).map(|j| column(gen, j)).collect::<Vec<_>>());
    let u0 = warm.map(|w| w.to_vec()).unwrap_or_else(|| int_identity(d));
    let start = cols.combine(&u0);
    let mul = |v: &[Vec<BigInt>], u: &[Vec<BigInt>]| -> Vec<Vec<BigInt>> {
        v.iter()
            .map(|row| (0..d).map(|j| row.iter().zip(u).fold(BigInt::zero(), |acc, (a, urow)| acc + a * &urow[j])).collect())
            .collect()
    };
    // The floating-point pass is enough when its Gram–Schmidt data, recomputed from the
    // exact basis, is sound; otherwise exact LLL takes over.
    let float = float_lll(&start).and_then(|v| {
        let v: Vec<Vec<BigInt>> = v.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect();
        let u = mul(&v, &u0);
        let basis_f64: Vec<Vec<f64>> =
            cols.combine(&u).iter().map(|r| r.iter().map(rational_to_f64).collect()).collect();
        let (mu, bn) = float_gs(&basis_f64);
        let sound = bn.iter().all(|n| n.is_finite() && *n > 0.0)
            && (1..d).all(|i| (0..i).all(|j| mu[i][j].abs() <= 0.51))
            && (1..d).all(|k| bn[k] >= (0.9 - mu[k][k - 1] * mu[k][k - 1]) * bn[k - 1]);
        sound.then_some((u, basis_f64, mu, bn))
    });
    let (u, basis_f64, mu, bn) = match float {
        Some(f) => f,
        None => {
            let red = lll_reduce(&start, LLL_DELTA)?;
            let u = mul(&red.transform, &u0);
            let basis_f64 = red.basis.iter().map(|v| v.iter().map(rational_to_f64).collect()).collect();
            (u, basis_f64, red.mu_f64(), red.gs_norms_sq_f64())
        }
    };
    let (c, shift) = match c0 {
        None => (vec![0.0; d], vec![BigInt::zero(); d]),
        Some(c0) => {
            // solve U^T x = c0
            let ut: Mat = (0..d)
                .map(|i| (0..d).map(|j| BigRational::from_integer(u[j][i].clone())).collect())
                .collect();
            let x = solve(&ut, c0)?;
            let shift: Vec<BigInt> = x.iter().map(|v| v.floor().to_integer()).collect();
            let frac: Vec<BigRational> =
                x.iter().zip(&shift).map(|(v, s)| v - BigRational::from_integer(s.clone())).collect();
            (frac.iter().map(rational_to_f64).collect(), shift)
        }
    };
    Ok(ReducedFrame { mu, bn, u, c, shift, basis_f64 })
}

/// A lattice point found by enumeration: integer coordinates `n` (so the
/// point is `gen * (n + c0)`) and its approximate image.
pub(crate) struct Hit {
    pub n: Vec<BigInt>,
    pub approx: Vec<f64>,
}

impl ReducedFrame {
    /// Euclidean norm of the best basis-or-Babai point: an upper bound on the
    /// shortest Euclidean length in the frame.
    pub fn upper_bound(&self) -> f64 {
        let d = self.basis_f64.len();
        if self.c.iter().all(|&x| x == 0.0) {
            return self
                .basis_f64
                .iter()
                .map(|b| b.iter().map(|x| x * x).sum::<f64>().sqrt())
                .fold(f64::INFINITY, f64::min);
        }
        // Babai-style nearest plane
        let mu = &self.mu;
        let mut y = vec![0.0; d];
        for i in (0..d).rev() {
            let mut ctr = -self.c[i];
            for j in i + 1..d {
                ctr -= mu[j][i] * (y[j] + self.c[j]);
            }
            y[i] = ctr.round();
        }
        let p = self.point(&y);
        p.iter().map(|x| x * x).sum::<f64>().sqrt()
    }

    fn point(&self, z: &[f64]) -> Vec<f64> {
        let dim = self.basis_f64[0].len();
        let mut p = vec![0.0; dim];
        for (i, b) in self.basis_f64.iter().enumerate() {
            let y = z[i] + self.c[i];
            for (x, bb) in p.iter_mut().zip(b) {
                *x += y * bb;
            }
        }
        p
    }

    /// Fincke–Pohst: every `z` with `||sum (z_i + c_i) b_i|| <= radius`.
    /// Returns `Err(EmptySet)` style overflow as `None` once `cap` is passed.
    pub fn enumerate(&self, radius: f64, cap: usize) -> Option<Vec<Hit>> {
        let d = self.basis_f64.len();
        let (bn, mu) = (&self.bn, &self.mu);
        let r2 = radius * radius * (1.0 + 1e-9);
        let mut out = Vec::new();
        let mut z = vec![0i64; d];
        let ok = self.fp(d, 0.0, r2, bn, mu, &mut z, &mut out, cap);
        if !ok {
            return None;
        }
        Some(out)
    }

    #[allow(clippy::too_many_arguments)]
    fn fp(
        &self,
        level: usize,
        partial: f64,
        r2: f64,
        bn: &[f64],
        mu: &[Vec<f64>],
        z: &mut Vec<i64>,
        out: &mut Vec<Hit>,
        cap: usize,
    ) -> bool {
        let d = bn.len();
        if level == 0 {
            let zf: Vec<f64> = z.iter().map(|&x| x as f64).collect();
            if zf.iter().zip(&self.c).all(|(a, b)| *a == 0.0 && *b == 0.0) {
                return true;
            }
            let approx = self.point(&zf);
            let n = self.coords(z);
            out.push(Hit { n, approx });
            return out.len() <= cap;
        }
        let i = level - 1;
        let mut ctr = -self.c[i];
        for j in i + 1..d {
            ctr -= mu[j][i] * (z[j] as f64 + self.c[j]);
        }
        let rem = (r2 - partial).max(0.0);
        let w = (rem / bn[i]).sqrt() * (1.0 + 1e-9) + 1e-12;
        let (lo, hi) = ((ctr - w).ceil(), (ctr + w).floor());
        if !(lo.is_finite() && hi.is_finite()) || hi - lo > 1e7 {
            return false;
        }
        let mut k = lo as i64;
        while (k as f64) <= hi {
            let t = k as f64 - ctr;
            let s = partial + bn[i] * t * t;
            if s <= r2 * (1.0 + 1e-9) + 1e-300 {
                z[i] = k;
                if !self.fp(i, s, r2, bn, mu, z, out, cap) {
                    return false;
                }
            }
            k += 1;
        }
        z[i] = 0;
        true
    }

    /// `n = U^T (z - shift)`.
    pub fn coords(&self, z: &[i64]) -> Vec<BigInt> {
        let d = z.len();
        (0..d)
            .map(|j| {
                (0..d).fold(BigInt::zero(), |acc, i| acc + (BigInt::from(z[i]) - &self.shift[i]) * &self.u[i][j])
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arithmetic::rat;
    use crate::lattice::linalg::identity;

    #[test]
    fn unit_ball_of_z2() {
        let f = reduce_frame(&identity(2), None, None).unwrap();
        let hits = f.enumerate(1.0, 100).unwrap();
        assert_eq!(hits.len(), 4);
    }

    #[test]
    fn affine_half_offsets() {
        let c0 = vec![rat(1, 2), rat(1, 2)];
        let f = reduce_frame(&identity(2), Some(&c0), None).unwrap();
        let hits = f.enumerate(0.8, 100).unwrap();
        assert_eq!(hits.len(), 4);
        for h in hits {
            assert!(h.approx.iter().all(|x| x.abs() == 0.5));
        }
    }

    #[test]
    fn brute_force_agreement() {
        let gen = vec![vec![rat(3, 2), rat(-7, 5)], vec![rat(1, 3), rat(2, 7)]];
        let c0 = vec![rat(1, 5), rat(2, 3)];
        let f = reduce_frame(&gen, Some(&c0), None).unwrap();
        let r = 3.0;
        let mut hits: Vec<Vec<BigInt>> = f.enumerate(r, 10_000).unwrap().into_iter().map(|h| h.n).collect();
        hits.sort();
        let mut brute = Vec::new();
        for a in -40i64..=40 {
            for b in -40i64..=40 {
                let y0 = rational_to_f64(&(rat(a, 1) + &c0[0]));
                let y1 = rational_to_f64(&(rat(b, 1) + &c0[1]));
                let p0 = 1.5 * y0 - 1.4 * y1;
                let p1 = y0 / 3.0 + 2.0 * y1 / 7.0;
                if p0 * p0 + p1 * p1 <= r * r {
                    brute.push(vec![BigInt::from(a), BigInt::from(b)]);
                }
            }
        }
        brute.sort();
        assert_eq!(hits, brute);
    }
}
