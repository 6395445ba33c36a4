use num_bigint::{BigInt, Sign};
use num_rational::BigRational;
use num_traits::{Signed, Zero};

const LN_2: f64 = std::f64::consts::LN_2;

/// Top 64 bits of `|n|` as an `f64` mantissa plus the binary shift, so that
/// `|n| ~ m * 2^shift`.
fn split_int(n: &BigInt) -> (f64, i64) {
    let mag = n.magnitude();
    let bits = mag.bits() as i64;
    if bits <= 64 {
        let v = mag.iter_u64_digits().next().unwrap_or(0);
        return (v as f64, 0);
    }
    let shift = bits - 64;
    let top: num_bigint::BigUint = mag >> (shift as usize);
    let v = top.iter_u64_digits().next().unwrap_or(0);
    (v as f64, shift)
}

/// Natural log of `|n|` for a non-zero integer.
pub fn ln_abs_int(n: &BigInt) -> f64 {
    let (m, s) = split_int(n);
    m.ln() + s as f64 * LN_2
}

/// Natural log of `|r|`; `-inf` for zero. Accurate to double precision even
/// when `r` is far outside the `f64` range.
pub fn ln_abs(r: &BigRational) -> f64 {
    if r.is_zero() {
        return f64::NEG_INFINITY;
    }
    ln_abs_int(r.numer()) - ln_abs_int(r.denom())
}

/// `r * 2^log2_scale` as an `f64`, computed without forming the scaled rational.
pub fn rational_to_f64_scaled(r: &BigRational, log2_scale: f64) -> f64 {
    if r.is_zero() {
        return 0.0;
    }
    let (mn, sn) = split_int(r.numer());
    let (md, sd) = split_int(r.denom());
    let e = (sn - sd) as f64 + log2_scale;
    let half = (e / 2.0).floor();
    let mag = (mn / md) * half.exp2() * (e - half).exp2();
    match r.numer().sign() {
        Sign::Minus => -mag,
        _ => mag,
    }
}

pub fn rational_to_f64(r: &BigRational) -> f64 {
    rational_to_f64_scaled(r, 0.0)
}

/// `sqrt(r)` for a non-negative rational, via logs so huge or tiny values
/// stay finite whenever the result is representable.
pub fn sqrt_f64(r: &BigRational) -> f64 {
    if r.is_zero() {
        return 0.0;
    }
    debug_assert!(!r.is_negative());
    let x = rational_to_f64(r);
    if x.is_normal() {
        x.sqrt()
    } else {
        (0.5 * ln_abs(r)).exp()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arithmetic::rat;
    use num_traits::One;

    #[test]
    fn ln_of_huge_power_of_two() {
        let big = BigRational::new(BigInt::one(), BigInt::one() << 4000usize);
        assert!((ln_abs(&big) + 4000.0 * LN_2).abs() < 1e-9);
    }

    #[test]
    fn scaled_conversion() {
        let r = rat(3, 8);
        assert_eq!(rational_to_f64(&r), 0.375);
        assert!((rational_to_f64_scaled(&r, 3.0) - 3.0).abs() < 1e-15);
        assert!((rational_to_f64(&rat(-1, 3)) + 1.0 / 3.0).abs() < 1e-16);
    }

    #[test]
    fn sqrt_of_rational() {
        assert!((sqrt_f64(&rat(169, 4)) - 6.5).abs() < 1e-14);
    }
}
