//! Exact rational scalars.
//!
//! [`Rational`] is backed by [`num_rational::BigRational`], which keeps every
//! value in lowest terms with a positive denominator.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::ParseError;

pub type Rational = num_rational::BigRational;

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Parses `"3"`, `"-1/2"` or `"−1"` (U+2212 minus) into a rational.
pub fn parse_rational(text: &str) -> Result<Rational, ParseError> {
    let trimmed = text.trim();
    let (negative, body) = match trimmed.strip_prefix('-').or_else(|| trimmed.strip_prefix('\u{2212}')) {
        Some(rest) => (true, rest.trim_start()),
        None => (false, trimmed.strip_prefix('+').unwrap_or(trimmed)),
    };
    let err = |message: &str| ParseError {
        position: 0,
        message: format!("{message} in rational literal {text:?}"),
    };
    let (num, den) = match body.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (body, "1"),
    };
    let digits = |s: &str| !s.is_empty() && s.bytes().all(|b| b.is_ascii_digit());
    if !digits(num) || !digits(den) {
        return Err(err("malformed number"));
    }
    let num: BigInt = num.parse().map_err(|_| err("malformed numerator"))?;
    let den: BigInt = den.parse().map_err(|_| err("malformed denominator"))?;
    if den.is_zero() {
        return Err(err("zero denominator"));
    }
    let value = Rational::new(num, den);
    Ok(if negative { -value } else { value })
}

/// Formats without redundant `/1`.
pub fn format_rational(value: &Rational) -> String {
    if value.denom().is_one() {
        value.numer().to_string()
    } else {
        format!("{}/{}", value.numer(), value.denom())
    }
}
