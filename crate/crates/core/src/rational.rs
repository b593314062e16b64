//! Exact rational scalars.
//!
//! Everything in the crate is computed over [`Rational`], an arbitrary
//! precision fraction that is always kept in lowest terms with a positive
//! denominator. A handful of helpers cover the operations the rest of the
//! crate needs repeatedly: construction from small integers, the integer part
//! `[x]` (floor, for negative arguments too), and the `"num/den"` string form
//! used by every JSON surface.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Rational = BigRational;

/// `n/d` as an exact rational. Panics if `d == 0`.
pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Integer part `[x]`, i.e. the floor, also for negative `x`.
pub fn floor(x: &Rational) -> i64 {
    x.floor()
        .to_integer()
        .to_i64()
        .expect("floor out of i64 range")
}

/// Fractional part `x - [x]`, always in `[0, 1)`.
pub fn frac(x: &Rational) -> Rational {
    x - int(floor(x))
}

pub fn is_integer(x: &Rational) -> bool {
    x.is_integer()
}

/// Returns `Some(n)` if `x` is an integer fitting in `i64`.
pub fn as_i64(x: &Rational) -> Option<i64> {
    if x.is_integer() {
        x.to_integer().to_i64()
    } else {
        None
    }
}

/// Canonical string form: `"n"` for integers, `"n/d"` otherwise.
pub fn to_string(x: &Rational) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

pub fn parse(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("not a rational: {s:?}"));
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(bad());
            }
            Ok(Rational::new(n, d))
        }
        None => Ok(Rational::from_integer(s.parse().map_err(|_| bad())?)),
    }
}

/// Denominator of `x` as a `u64` (panics on absurdly large denominators).
pub fn denom_u64(x: &Rational) -> u64 {
    x.denom().to_u64().expect("denominator exceeds u64")
}

pub fn lcm(a: u64, b: u64) -> u64 {
    a.lcm(&b)
}

pub fn pow(x: &Rational, e: u32) -> Rational {
    num_traits::pow(x.clone(), e as usize)
}

pub fn abs(x: &Rational) -> Rational {
    x.abs()
}

pub fn zero() -> Rational {
    Rational::zero()
}

pub fn one() -> Rational {
    Rational::one()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn floor_is_integer_part_for_negatives() {
        assert_eq!(floor(&rat(7, 3)), 2);
        assert_eq!(floor(&rat(-7, 3)), -3);
        assert_eq!(floor(&int(-2)), -2);
        assert_eq!(frac(&rat(-1, 4)), rat(3, 4));
    }

    #[test]
    fn string_forms() {
        assert_eq!(to_string(&rat(4, 2)), "2");
        assert_eq!(to_string(&rat(-3, 6)), "-1/2");
        assert_eq!(parse("-1/2").unwrap(), rat(-1, 2));
        assert_eq!(parse(" 5 ").unwrap(), int(5));
        assert!(parse("1/0").is_err());
        assert!(parse("x").is_err());
    }
}
