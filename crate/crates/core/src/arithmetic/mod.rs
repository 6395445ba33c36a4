//! Exact scalar arithmetic, number specs and continued fractions.

mod cf;
mod float;
mod scalar;
mod spec;

pub use cf::{continued_fraction, ContinuedFraction};
pub use float::{ln_abs, ln_abs_int, rational_to_f64, rational_to_f64_scaled, sqrt_f64};
pub use scalar::ExactScalar;
pub use spec::{scalar_from_spec, NumberSpec};
pub(crate) use spec::{parse_decimal, parse_rational};

use num_bigint::BigInt;
use num_rational::BigRational;

/// Shorthand for an integer rational.
pub fn rat(p: i64, q: i64) -> BigRational {
    BigRational::new(BigInt::from(p), BigInt::from(q))
}

/// Exact conversion of a finite `f64` into a rational.
pub fn rat_from_f64(x: f64) -> BigRational {
    BigRational::from_float(x).expect("finite float")
}
