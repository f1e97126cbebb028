//! Exact rational scalars.
//!
//! `Rational` is an arbitrary-precision fraction kept in lowest terms with a
//! positive denominator. Every quantity in the crate (divisor coordinates,
//! body vertices, interval endpoints) is one of these.

use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

pub use num_rational::BigRational as Rational;

use crate::Error;

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn frac(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn zero() -> Rational {
    Rational::zero()
}

pub fn one() -> Rational {
    Rational::one()
}

/// Parses `"p/q"`, `"p"` or `"-p/q"`.
pub fn parse(s: &str) -> Result<Rational, Error> {
    let t = s.trim();
    if t.is_empty() {
        return Err(Error::Parse(format!("empty rational in {s:?}")));
    }
    let r = Rational::from_str(t).map_err(|_| Error::Parse(format!("invalid rational {s:?}")))?;
    if r.denom().is_zero() {
        return Err(Error::Parse(format!("zero denominator in {s:?}")));
    }
    Ok(r)
}

/// Canonical text form: `p` for integers, `p/q` otherwise.
pub fn fmt(q: &Rational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// Least common multiple of the denominators.
pub fn common_denominator<'a>(values: impl IntoIterator<Item = &'a Rational>) -> BigInt {
    values
        .into_iter()
        .fold(BigInt::one(), |acc, q| acc.lcm(q.denom()))
}

pub fn to_f64(q: &Rational) -> f64 {
    // Only used for OFF export and human-facing output.
    let n: f64 = q.numer().to_string().parse().unwrap_or(f64::NAN);
    let d: f64 = q.denom().to_string().parse().unwrap_or(f64::NAN);
    n / d
}

pub fn abs(q: &Rational) -> Rational {
    q.abs()
}

pub fn min(a: &Rational, b: &Rational) -> Rational {
    if a <= b {
        a.clone()
    } else {
        b.clone()
    }
}

pub fn max(a: &Rational, b: &Rational) -> Rational {
    if a >= b {
        a.clone()
    } else {
        b.clone()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lowest_terms() {
        let q = frac(6, -4);
        assert_eq!(q.numer(), &BigInt::from(-3));
        assert_eq!(q.denom(), &BigInt::from(2));
        assert_eq!(fmt(&q), "-3/2");
        assert_eq!(fmt(&int(7)), "7");
    }

    #[test]
    fn parse_forms() {
        assert_eq!(parse("3/6").unwrap(), frac(1, 2));
        assert_eq!(parse(" -5 ").unwrap(), int(-5));
        assert!(parse("1/0").is_err());
        assert!(parse("abc").is_err());
        assert!(parse("").is_err());
    }

    #[test]
    fn common_denominators() {
        let v = [frac(1, 4), frac(5, 6), int(2)];
        assert_eq!(common_denominator(&v), BigInt::from(12));
    }

    proptest::proptest! {
        #[test]
        fn add_sub_round_trip(p in -1000i64..1000, q in 1i64..1000, r in -1000i64..1000, s in 1i64..1000) {
            let a = frac(p, q);
            let b = frac(r, s);
            proptest::prop_assert_eq!((&a + &b) - &b, a.clone());
            proptest::prop_assert_eq!(parse(&fmt(&a)).unwrap(), a);
        }
    }
}
