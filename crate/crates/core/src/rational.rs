//! Exact rational scalars.
//!
//! Every quantity on a decision path in this crate is a `Rational`:
//! arbitrary-precision, always in canonical reduced form with a positive
//! denominator. Externally rationals read and write as `p/q`, or plain `p`
//! when the denominator is 1.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub type Rational = num_rational::BigRational;

/// `n/d` as a canonical rational. Panics if `d == 0`.
pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Integer as a rational.
pub fn rat_int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn zero() -> Rational {
    Rational::zero()
}

pub fn one() -> Rational {
    Rational::one()
}

/// Parse `p/q` or `p`. Rejects empty input and zero denominators.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    if s.is_empty() {
        return Err(Error::InvalidRational(s.to_string()));
    }
    match s.split_once('/') {
        Some((num, den)) => {
            let num: BigInt = num
                .trim()
                .parse()
                .map_err(|_| Error::InvalidRational(s.to_string()))?;
            let den: BigInt = den
                .trim()
                .parse()
                .map_err(|_| Error::InvalidRational(s.to_string()))?;
            if den.is_zero() {
                return Err(Error::InvalidRational(s.to_string()));
            }
            Ok(Rational::new(num, den))
        }
        None => {
            let num: BigInt = s
                .parse()
                .map_err(|_| Error::InvalidRational(s.to_string()))?;
            Ok(Rational::from_integer(num))
        }
    }
}

/// Canonical string form: `p/q`, or `p` when the denominator is 1.
pub fn format_rational(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// True iff the value is stored in canonical form: positive denominator and
/// coprime numerator/denominator.
pub fn is_canonical(r: &Rational) -> bool {
    use num_integer::Integer;
    r.denom().is_positive() && r.numer().gcd(r.denom()).is_one()
}
