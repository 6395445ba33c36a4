use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::scalar::ExactScalar;

/// Simple continued fraction of a certified scalar.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ContinuedFraction {
    pub partial_quotients: Vec<BigInt>,
    /// `(p_k, q_k)` for each prefix.
    pub convergents: Vec<(BigInt, BigInt)>,
    /// Number of leading terms shared by every real within the certified error.
    pub stable_prefix_len: usize,
}

impl ContinuedFraction {
    pub fn len(&self) -> usize {
        self.partial_quotients.len()
    }

    pub fn is_empty(&self) -> bool {
        self.partial_quotients.is_empty()
    }

    /// The certified convergents only.
    pub fn stable_convergents(&self) -> &[(BigInt, BigInt)] {
        &self.convergents[..self.stable_prefix_len]
    }
}

pub(crate) fn partial_quotients(x: &BigRational, limit: usize) -> Vec<BigInt> {
    let mut out = Vec::new();
    let mut r = x.clone();
    while out.len() < limit {
        let a = r.floor();
        out.push(a.to_integer());
        let frac = r - a;
        if frac.is_zero() {
            break;
        }
        r = frac.recip();
    }
    out
}

pub(crate) fn convergents(quotients: &[BigInt]) -> Vec<(BigInt, BigInt)> {
    let (mut p0, mut q0) = (BigInt::one(), BigInt::zero());
    let (mut p1, mut q1) = (BigInt::zero(), BigInt::one());
    let mut out = Vec::with_capacity(quotients.len());
    for a in quotients {
        let p = a * &p0 + &p1;
        let q = a * &q0 + &q1;
        p1 = std::mem::replace(&mut p0, p.clone());
        q1 = std::mem::replace(&mut q0, q.clone());
        out.push((p, q));
    }
    out
}

fn common_prefix(a: &[BigInt], b: &[BigInt]) -> usize {
    a.iter().zip(b).take_while(|(x, y)| x == y).count()
}

/// Expands `x.value()` to at most `max_terms` partial quotients.
///
/// For inexact scalars the endpoints `value ± error` are expanded too and only
/// the terms they share (minus one, to stay clear of the boundary) are
/// reported as stable.
pub fn continued_fraction(x: &ExactScalar, max_terms: usize) -> ContinuedFraction {
    let mut partial = partial_quotients(x.value(), max_terms + 1);
    let stable_prefix_len = if x.is_exact() {
        partial.len().min(max_terms)
    } else {
        let lo = partial_quotients(&x.lower(), max_terms + 1);
        let hi = partial_quotients(&x.upper(), max_terms + 1);
        let shared = common_prefix(&lo, &hi).min(common_prefix(&lo, &partial));
        shared.saturating_sub(1).min(max_terms)
    };
    partial.truncate(max_terms);
    let convergents = convergents(&partial);
    ContinuedFraction { partial_quotients: partial, convergents, stable_prefix_len }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arithmetic::{rat, scalar_from_spec, NumberSpec};
    use num_integer::Roots;
    use num_traits::Signed;

    #[test]
    fn golden_is_all_ones() {
        let x = scalar_from_spec(&NumberSpec::Golden, 256).unwrap();
        let cf = continued_fraction(&x, 20);
        assert_eq!(cf.stable_prefix_len, 20);
        assert!(cf.partial_quotients.iter().all(|a| a.is_one()));
        let (mut f0, mut f1) = (1u64, 1u64);
        for (p, q) in &cf.convergents {
            // p_k = F_{k+2}, q_k = F_{k+1}
            assert_eq!(q, &BigInt::from(f0));
            assert_eq!(p, &BigInt::from(f1));
            let next = f0 + f1;
            f0 = f1;
            f1 = next;
        }
        let (p, q) = cf.convergents[19].clone();
        assert_eq!((p, q), (BigInt::from(10946), BigInt::from(6765)));
    }

    #[test]
    fn twenty_two_sevenths() {
        let cf = continued_fraction(&ExactScalar::exact(rat(22, 7)), 10);
        assert_eq!(cf.partial_quotients, vec![BigInt::from(3), BigInt::from(7)]);
        assert_eq!(cf.stable_prefix_len, 2);
    }

    // sqrt(D) via the exact surd recursion m' = d a - m, d' = (D - m'^2)/d.
    fn surd_oracle(d: u64, terms: usize) -> Vec<BigInt> {
        let a0 = d.sqrt();
        let (mut m, mut den, mut a) = (0u64, 1u64, a0);
        let mut out = vec![BigInt::from(a0)];
        while out.len() < terms {
            m = den * a - m;
            den = (d - m * m) / den;
            a = (a0 + m) / den;
            out.push(BigInt::from(a));
        }
        out
    }

    #[test]
    fn sqrt2_matches_surd_oracle() {
        let x = scalar_from_spec(&NumberSpec::Sqrt(rat(2, 1)), 256).unwrap();
        let cf = continued_fraction(&x, 200);
        assert!(cf.stable_prefix_len >= 20);
        let oracle = surd_oracle(2, cf.stable_prefix_len);
        assert_eq!(&cf.partial_quotients[..cf.stable_prefix_len], &oracle[..]);
    }

    #[test]
    fn determinant_and_round_trip() {
        let x = scalar_from_spec(&NumberSpec::Sqrt(rat(7, 3)), 128).unwrap();
        let cf = continued_fraction(&x, 60);
        let c = &cf.convergents;
        for k in 1..cf.stable_prefix_len {
            let det = &c[k].0 * &c[k - 1].1 - &c[k - 1].0 * &c[k].1;
            assert_eq!(det.abs(), BigInt::one());
            let q = BigRational::from_integer(c[k].1.clone());
            let approx = BigRational::new(c[k].0.clone(), c[k].1.clone());
            assert!((approx - x.value()).abs() < (&q * &q).recip());
        }
    }

    #[test]
    fn truncation_limits_stability() {
        let x = scalar_from_spec(&NumberSpec::Golden, 40).unwrap();
        let cf = continued_fraction(&x, 100);
        // F_k^2 ~ 2^41 bounds the certifiable depth
        assert!(cf.stable_prefix_len < 35 && cf.stable_prefix_len > 20);
        assert!(cf.partial_quotients[..cf.stable_prefix_len].iter().all(|a| a.is_one()));
    }
}
