use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_rational::BigRational;
use num_traits::{Signed, Zero};

use super::float::rational_to_f64;

/// A rational approximant together with a one-sided certified error bound:
/// the represented real lies in `[value - certified_error, value + certified_error]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ExactScalar {
    value: BigRational,
    certified_error: BigRational,
}

impl ExactScalar {
    pub fn exact(value: BigRational) -> Self {
        Self { value, certified_error: BigRational::zero() }
    }

    /// Panics if `certified_error` is negative.
    pub fn with_error(value: BigRational, certified_error: BigRational) -> Self {
        assert!(!certified_error.is_negative(), "certified error must be non-negative");
        Self { value, certified_error }
    }

    pub fn value(&self) -> &BigRational {
        &self.value
    }

    pub fn certified_error(&self) -> &BigRational {
        &self.certified_error
    }

    pub fn is_exact(&self) -> bool {
        self.certified_error.is_zero()
    }

    pub fn to_f64(&self) -> f64 {
        rational_to_f64(&self.value)
    }

    pub fn lower(&self) -> BigRational {
        &self.value - &self.certified_error
    }

    pub fn upper(&self) -> BigRational {
        &self.value + &self.certified_error
    }
}

impl fmt::Display for ExactScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_exact() {
            write!(f, "{}", self.value)
        } else {
            write!(f, "{:.17} ± {:.3e}", self.to_f64(), rational_to_f64(&self.certified_error))
        }
    }
}

impl Add for &ExactScalar {
    type Output = ExactScalar;
    fn add(self, rhs: &ExactScalar) -> ExactScalar {
        ExactScalar {
            value: &self.value + &rhs.value,
            certified_error: &self.certified_error + &rhs.certified_error,
        }
    }
}

impl Sub for &ExactScalar {
    type Output = ExactScalar;
    fn sub(self, rhs: &ExactScalar) -> ExactScalar {
        ExactScalar {
            value: &self.value - &rhs.value,
            certified_error: &self.certified_error + &rhs.certified_error,
        }
    }
}

impl Mul for &ExactScalar {
    type Output = ExactScalar;
    // |ab - a'b'| <= |a| e_b + |b| e_a + e_a e_b
    fn mul(self, rhs: &ExactScalar) -> ExactScalar {
        let err = self.value.abs() * &rhs.certified_error
            + rhs.value.abs() * &self.certified_error
            + &self.certified_error * &rhs.certified_error;
        ExactScalar { value: &self.value * &rhs.value, certified_error: err }
    }
}

impl Neg for &ExactScalar {
    type Output = ExactScalar;
    fn neg(self) -> ExactScalar {
        ExactScalar { value: -&self.value, certified_error: self.certified_error.clone() }
    }
}

impl From<BigRational> for ExactScalar {
    fn from(value: BigRational) -> Self {
        Self::exact(value)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arithmetic::rat;
    use proptest::prelude::*;

    proptest! {
        #[test]
        fn product_error_contains_true_product(
            a in -100i64..100, b in -100i64..100,
            ea in 0i64..10, eb in 0i64..10,
            ta in -1.0f64..1.0, tb in -1.0f64..1.0,
        ) {
            let x = ExactScalar::with_error(rat(a, 7), rat(ea, 100));
            let y = ExactScalar::with_error(rat(b, 11), rat(eb, 100));
            // true values somewhere inside the error intervals
            let xt = x.value() + x.certified_error() * crate::arithmetic::rat_from_f64(ta);
            let yt = y.value() + y.certified_error() * crate::arithmetic::rat_from_f64(tb);
            let p = &x * &y;
            prop_assert!((xt * yt - p.value()).abs() <= *p.certified_error());
            let s = &x + &y;
            prop_assert_eq!(s.certified_error(), &(x.certified_error() + y.certified_error()));
        }
    }
}
