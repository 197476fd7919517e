//! Exact rationals. Values are `num_rational::BigRational`, which is always
//! reduced with a positive denominator; its `Display` already matches the
//! wire format (`"num/den"`, or `"k"` for integers).

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub type Rational = BigRational;

pub fn int<T: Into<BigInt>>(value: T) -> Rational {
    Rational::from_integer(value.into())
}

pub fn ratio<T: Into<BigInt>>(num: T, den: T) -> Rational {
    Rational::new(num.into(), den.into())
}

pub fn from_biguint(value: &BigUint) -> Rational {
    Rational::from_integer(BigInt::from(value.clone()))
}

/// `base^exp` for a possibly negative exponent.
pub fn pow(base: &Rational, exp: i64) -> Rational {
    if exp >= 0 {
        num_traits::pow(base.clone(), exp as usize)
    } else {
        num_traits::pow(base.recip(), exp.unsigned_abs() as usize)
    }
}

/// Parses `"k"` or `"num/den"` with an optional leading minus sign.
pub fn parse(text: &str) -> Result<Rational> {
    let text = text.trim();
    let bad = || Error::InvalidArgument(format!("malformed rational {text:?}"));
    let (num, den) = match text.split_once('/') {
        Some((n, d)) => (n, Some(d)),
        None => (text, None),
    };
    let num: BigInt = num.trim().parse().map_err(|_| bad())?;
    let den: BigInt = match den {
        Some(d) => d.trim().parse().map_err(|_| bad())?,
        None => BigInt::one(),
    };
    if den.is_zero() || den.is_negative() {
        return Err(bad());
    }
    Ok(Rational::new(num, den))
}

/// Returns the integer value if the rational is integral.
pub fn to_integer(value: &Rational) -> Option<BigInt> {
    value.is_integer().then(|| value.to_integer())
}
