use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Pow, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::scalar::ExactScalar;
use crate::error::{Error, Result};

/// A textual description of a real number.
///
/// Grammar: `rat:p/q`, `sqrt:p/q`, `golden`,
/// `liouville:b=<int>,nu=<decimal>,b1=<int>,k=<int>`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum NumberSpec {
    Rational(BigRational),
    Sqrt(BigRational),
    Golden,
    /// `sum_{j=1..terms} base^(-e_j)` with `e_1 = b1`, `e_{j+1} = ceil(nu * e_j)`.
    Liouville { base: u32, nu: BigRational, b1: u64, terms: usize },
}

impl NumberSpec {
    /// Exponent sequence `e_1, ..., e_count` of a Liouville spec.
    pub fn liouville_exponents(nu: &BigRational, b1: u64, count: usize) -> Vec<u64> {
        let mut out = Vec::with_capacity(count);
        let mut e = b1;
        for _ in 0..count {
            out.push(e);
            let next = (nu * BigRational::from_integer(BigInt::from(e))).ceil();
            e = next.to_integer().to_u64().expect("exponent overflow");
        }
        out
    }

    fn validate(&self) -> Result<()> {
        match self {
            NumberSpec::Rational(_) | NumberSpec::Golden => Ok(()),
            NumberSpec::Sqrt(r) if r.is_positive() => Ok(()),
            NumberSpec::Sqrt(r) => Err(Error::MalformedSpec(format!("sqrt of non-positive {r}"))),
            NumberSpec::Liouville { base, nu, b1, terms } => {
                if *nu <= BigRational::one() {
                    return Err(Error::LiouvilleGrowth(nu.to_string()));
                }
                if *base < 2 || *b1 < 1 || *terms < 1 {
                    return Err(Error::MalformedSpec(self.to_string()));
                }
                Ok(())
            }
        }
    }
}

pub(crate) fn parse_rational(s: &str) -> Result<BigRational> {
    let bad = || Error::MalformedSpec(s.to_string());
    let (p, q) = match s.split_once('/') {
        Some((p, q)) => (p.trim(), q.trim()),
        None => (s.trim(), "1"),
    };
    let p: BigInt = p.parse().map_err(|_| bad())?;
    let q: BigInt = q.parse().map_err(|_| bad())?;
    if q.is_zero() {
        return Err(bad());
    }
    Ok(BigRational::new(p, q))
}

/// Parses a plain decimal such as `3`, `2.5` or `-0.125` exactly.
pub(crate) fn parse_decimal(s: &str) -> Result<BigRational> {
    let bad = || Error::MalformedSpec(s.to_string());
    let s = s.trim();
    let (int, frac) = s.split_once('.').unwrap_or((s, ""));
    if frac.chars().any(|c| !c.is_ascii_digit()) {
        return Err(bad());
    }
    let digits = format!("{int}{frac}");
    let n: BigInt = digits.parse().map_err(|_| bad())?;
    let d = Pow::pow(BigInt::from(10), frac.len());
    Ok(BigRational::new(n, d))
}

impl FromStr for NumberSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || Error::MalformedSpec(s.to_string());
        let spec = if s == "golden" {
            NumberSpec::Golden
        } else if let Some(rest) = s.strip_prefix("rat:") {
            NumberSpec::Rational(parse_rational(rest)?)
        } else if let Some(rest) = s.strip_prefix("sqrt:") {
            NumberSpec::Sqrt(parse_rational(rest)?)
        } else if let Some(rest) = s.strip_prefix("liouville:") {
            let (mut base, mut nu, mut b1, mut terms) = (None, None, None, None);
            for kv in rest.split(',') {
                let (k, v) = kv.split_once('=').ok_or_else(bad)?;
                match k.trim() {
                    "b" => base = Some(v.trim().parse::<u32>().map_err(|_| bad())?),
                    "nu" => nu = Some(parse_decimal(v)?),
                    "b1" => b1 = Some(v.trim().parse::<u64>().map_err(|_| bad())?),
                    "k" => terms = Some(v.trim().parse::<usize>().map_err(|_| bad())?),
                    _ => return Err(bad()),
                }
            }
            NumberSpec::Liouville {
                base: base.ok_or_else(bad)?,
                nu: nu.ok_or_else(bad)?,
                b1: b1.ok_or_else(bad)?,
                terms: terms.ok_or_else(bad)?,
            }
        } else {
            return Err(bad());
        };
        spec.validate()?;
        Ok(spec)
    }
}

fn fmt_decimal(r: &BigRational) -> String {
    if r.is_integer() {
        return r.to_integer().to_string();
    }
    // exact when the denominator divides a power of ten
    let mut scaled = r.clone();
    for places in 1..40 {
        scaled *= BigRational::from_integer(BigInt::from(10));
        if scaled.is_integer() {
            let digits = scaled.to_integer().abs().to_string();
            let digits = format!("{digits:0>width$}", width = places + 1);
            let (i, f) = digits.split_at(digits.len() - places);
            let sign = if r.is_negative() { "-" } else { "" };
            return format!("{sign}{i}.{f}");
        }
    }
    format!("{}", super::float::rational_to_f64(r))
}

impl fmt::Display for NumberSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NumberSpec::Rational(r) => write!(f, "rat:{}/{}", r.numer(), r.denom()),
            NumberSpec::Sqrt(r) => write!(f, "sqrt:{}/{}", r.numer(), r.denom()),
            NumberSpec::Golden => write!(f, "golden"),
            NumberSpec::Liouville { base, nu, b1, terms } => {
                write!(f, "liouville:b={base},nu={},b1={b1},k={terms}", fmt_decimal(nu))
            }
        }
    }
}

impl Serialize for NumberSpec {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for NumberSpec {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// `floor(sqrt(r) * 2^k) / 2^k`, error below `2^-k`.
fn sqrt_dyadic(r: &BigRational, k: usize) -> BigRational {
    // sqrt(p/q) = sqrt(p*q)/q; floor(sqrt(p q 4^k)) / (q 2^k)
    let pq = r.numer() * r.denom();
    let root = (pq << (2 * k)).sqrt();
    BigRational::new(root, r.denom() << k)
}

/// Materialises a number spec as a rational approximant with certified error.
///
/// Irrational kinds get `certified_error <= 2^-(precision_bits+1)`. The
/// Liouville kind is the exact finite sum, with the dropped tail bounded by
/// `2 * base^(-e_{k+1})`.
pub fn scalar_from_spec(spec: &NumberSpec, precision_bits: u32) -> Result<ExactScalar> {
    if precision_bits < 32 {
        return Err(Error::InvalidArgument(format!("precision_bits {precision_bits} < 32")));
    }
    spec.validate()?;
    let k = precision_bits as usize + 1;
    let err = BigRational::new(BigInt::one(), BigInt::one() << k);
    Ok(match spec {
        NumberSpec::Rational(r) => ExactScalar::exact(r.clone()),
        NumberSpec::Sqrt(r) => ExactScalar::with_error(sqrt_dyadic(r, k), err),
        NumberSpec::Golden => {
            // (1 + sqrt 5)/2, sqrt 5 to 2^-(k+1) => total error 2^-(k+2)
            let s5 = sqrt_dyadic(&BigRational::from_integer(BigInt::from(5)), k + 1);
            let half = BigRational::new(BigInt::one(), BigInt::from(2));
            ExactScalar::with_error((BigRational::one() + s5) * half, err)
        }
        NumberSpec::Liouville { base, nu, b1, terms } => {
            let exps = NumberSpec::liouville_exponents(nu, *b1, terms + 1);
            let b = BigInt::from(*base);
            let mut sum = BigRational::zero();
            for &e in &exps[..*terms] {
                sum += BigRational::new(BigInt::one(), Pow::pow(&b, e));
            }
            let tail = BigRational::new(BigInt::from(2), Pow::pow(&b, exps[*terms]));
            ExactScalar::with_error(sum, tail)
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arithmetic::rat;

    #[test]
    fn liouville_denominator_and_exponents() {
        let spec: NumberSpec = "liouville:b=2,nu=3,b1=2,k=5".parse().unwrap();
        let NumberSpec::Liouville { nu, b1, .. } = &spec else { unreachable!() };
        assert_eq!(NumberSpec::liouville_exponents(nu, *b1, 5), vec![2, 6, 18, 54, 162]);
        let x = scalar_from_spec(&spec, 64).unwrap();
        assert_eq!(x.value().denom(), &(BigInt::one() << 162usize));
        // tail bound 2 * 2^-486
        assert_eq!(x.certified_error(), &BigRational::new(BigInt::from(2), BigInt::one() << 486usize));
    }

    #[test]
    fn fractional_growth_rounds_up() {
        let nu = parse_decimal("2.5").unwrap();
        assert_eq!(NumberSpec::liouville_exponents(&nu, 3, 4), vec![3, 8, 20, 50]);
    }

    #[test]
    fn rational_is_exact() {
        let x = scalar_from_spec(&"rat:3/7".parse().unwrap(), 64).unwrap();
        assert_eq!(x.value(), &rat(3, 7));
        assert!(x.certified_error().is_zero());
    }

    #[test]
    fn golden_interval_newton_oracle() {
        let x = scalar_from_spec(&NumberSpec::Golden, 256).unwrap();
        let r = x.value();
        // f(r) = r^2 - r - 1 = (r - phi)(r - psi), |r - psi| >= r + 0.6
        let f = r * r - r - BigRational::one();
        let bound = f.abs() / (r + rat(3, 5));
        assert!(bound < BigRational::new(BigInt::one(), BigInt::one() << 256usize));
        assert!(x.certified_error() < &BigRational::new(BigInt::one(), BigInt::one() << 256usize));
    }

    #[test]
    fn errors() {
        assert!(matches!("liouville:b=2,nu=1,b1=2,k=3".parse::<NumberSpec>(), Err(Error::LiouvilleGrowth(_))));
        assert!("rat:1/0".parse::<NumberSpec>().is_err());
        assert!("sqrt:-2/1".parse::<NumberSpec>().is_err());
        assert!("pi".parse::<NumberSpec>().is_err());
        assert!(scalar_from_spec(&NumberSpec::Golden, 16).is_err());
    }

    #[test]
    fn display_round_trips() {
        for s in ["rat:-3/7", "sqrt:2/1", "golden", "liouville:b=2,nu=2.5,b1=2,k=7"] {
            let spec: NumberSpec = s.parse().unwrap();
            assert_eq!(spec.to_string(), s);
            assert_eq!(spec.to_string().parse::<NumberSpec>().unwrap(), spec);
        }
    }

    #[test]
    fn deterministic() {
        let spec = NumberSpec::Sqrt(rat(2, 1));
        assert_eq!(scalar_from_spec(&spec, 300).unwrap(), scalar_from_spec(&spec, 300).unwrap());
    }
}
