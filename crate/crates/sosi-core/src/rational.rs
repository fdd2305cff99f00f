//! Exact rational arithmetic. All cost quantities in this crate are
//! `Rational`s; no floating point ever enters a computation.

use num::bigint::BigInt;
use num::{BigRational, One, Signed, Zero};

use crate::error::{Error, Result};

/// Arbitrary-precision rational, always in lowest terms with a positive
/// denominator.
pub type Rational = BigRational;

pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Parses the grammar `-?[0-9]+("/"[1-9][0-9]*)?`.
pub fn parse_rational(field: &'static str, text: &str) -> Result<Rational> {
    let err = || Error::InvalidRational {
        field,
        text: text.to_string(),
    };
    let (num_part, den_part) = match text.split_once('/') {
        Some((a, b)) => (a, Some(b)),
        None => (text, None),
    };
    let digits = |s: &str| !s.is_empty() && s.bytes().all(|b| b.is_ascii_digit());
    let num_ok = match num_part.strip_prefix('-') {
        Some(rest) => digits(rest),
        None => digits(num_part),
    };
    if !num_ok {
        return Err(err());
    }
    let numer: BigInt = num_part.parse().map_err(|_| err())?;
    let denom: BigInt = match den_part {
        Some(d) => {
            // leading zeros and zero denominators are outside the grammar
            if !digits(d) || d.starts_with('0') {
                return Err(err());
            }
            d.parse().map_err(|_| err())?
        }
        None => BigInt::one(),
    };
    Ok(Rational::new(numer, denom))
}

/// Canonical rendering: `a` for integers, `a/b` otherwise, lowest terms.
pub fn format_rational(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn is_nonnegative(r: &Rational) -> bool {
    !r.is_negative()
}

pub fn is_positive(r: &Rational) -> bool {
    r.is_positive()
}

pub fn zero() -> Rational {
    Rational::zero()
}
