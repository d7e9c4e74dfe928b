//! Exact rational arithmetic helpers.
//!
//! Every probability in this crate is a `BigRational`: arbitrary-precision,
//! always in lowest terms, denominator > 0. There is no floating point and
//! no tolerance anywhere; all comparisons are exact.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub use num_rational::BigRational as Rational;

/// Build a rational from small integers. Panics on a zero denominator.
pub fn ratio(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn zero() -> Rational {
    Rational::zero()
}

pub fn one() -> Rational {
    Rational::one()
}

/// Parse an exact rational literal: `"num/den"` or a bare integer `"num"`.
pub fn parse_ratio(s: &str) -> Result<Rational> {
    let s = s.trim();
    let (num_str, den_str) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let num: BigInt = num_str
        .parse()
        .map_err(|_| Error::Parse(format!("non-rational probability literal: {s:?}")))?;
    let den: BigInt = den_str
        .parse()
        .map_err(|_| Error::Parse(format!("non-rational probability literal: {s:?}")))?;
    if den.is_zero() {
        return Err(Error::Parse(format!("zero denominator in literal: {s:?}")));
    }
    Ok(Rational::new(num, den))
}

/// Format as `"num/den"`, always with an explicit denominator (`"1/1"`, `"0/1"`).
pub fn format_ratio(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Exact sum of a slice.
pub fn sum(values: &[Rational]) -> Rational {
    values.iter().fold(Rational::zero(), |acc, v| acc + v)
}

/// True when every entry is >= 0.
pub fn all_nonnegative(values: &[Rational]) -> bool {
    values.iter().all(|v| !v.is_negative())
}
