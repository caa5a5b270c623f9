//! Exact rational kernel.

use alloc::format;
use alloc::string::String;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::matrix::RationalMatrix;
use crate::error::Result;
use crate::scalar::Rational;

/// `p / q` in canonical form. Panics when `q == 0`.
pub fn ratio(p: i64, q: i64) -> Rational {
    Rational::new(BigInt::from(p), BigInt::from(q))
}

/// Exact inverse by Gauss-Jordan elimination over the rationals.
///
/// Fails with [`crate::Error::Singular`] when some column has no nonzero pivot.
pub fn rational_invert(a: &RationalMatrix) -> Result<RationalMatrix> {
    a.inverse()
}

/// Canonical text form: `"p/q"`, or `"p"` for integers.
pub fn format_rational(r: &Rational) -> String {
    if r.denom().is_one() {
        format!("{}", r.numer())
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum RationalParseError {
    #[error("not of the form \"p/q\" or \"p\"")]
    Malformed,
    #[error("zero denominator")]
    ZeroDenominator,
    #[error("not in lowest terms with a positive denominator")]
    NotReduced,
}

/// Parses `"p/q"` or `"p"`. Only canonical forms are accepted: lowest terms,
/// positive denominator, no `"/1"` suffix.
pub fn parse_rational(text: &str) -> core::result::Result<Rational, RationalParseError> {
    let parse_int = |s: &str| -> core::result::Result<BigInt, RationalParseError> {
        let digits = s.strip_prefix('-').unwrap_or(s);
        if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
            return Err(RationalParseError::Malformed);
        }
        s.parse::<BigInt>()
            .map_err(|_| RationalParseError::Malformed)
    };
    match text.split_once('/') {
        None => Ok(Rational::from_integer(parse_int(text)?)),
        Some((p, q)) => {
            if q.starts_with('-') {
                return Err(RationalParseError::NotReduced);
            }
            let p = parse_int(p)?;
            let q = parse_int(q)?;
            if q.is_zero() {
                return Err(RationalParseError::ZeroDenominator);
            }
            let r = Rational::new(p.clone(), q.clone());
            if *r.numer() != p || *r.denom() != q || q.is_one() {
                return Err(RationalParseError::NotReduced);
            }
            Ok(r)
        }
    }
    .and_then(|r| {
        // Rejects leading zeros, "-0" and other non-canonical spellings.
        if format_rational(&r) == text {
            Ok(r)
        } else {
            Err(RationalParseError::NotReduced)
        }
    })
}
