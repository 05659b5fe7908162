//! Exact rational helpers. Everything user-facing is written as `p/q` strings.

use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub type Rational = BigRational;

/// `num / den` as a reduced rational. Panics if `den == 0`.
pub fn q(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn int(value: i64) -> Rational {
    Rational::from_integer(BigInt::from(value))
}

/// Parses `p`, `p/q`, `-p/q` (surrounding whitespace allowed). The denominator
/// must be nonzero; the result is reduced.
pub fn parse_rational(text: &str) -> Result<Rational> {
    let t = text.trim();
    let bad = || Error::Parse(format!("malformed rational {text:?}"));
    if t.is_empty() {
        return Err(bad());
    }
    match t.split_once('/') {
        None => BigInt::from_str(t)
            .map(Rational::from_integer)
            .map_err(|_| bad()),
        Some((p, d)) => {
            let p = BigInt::from_str(p.trim()).map_err(|_| bad())?;
            let d = BigInt::from_str(d.trim()).map_err(|_| bad())?;
            if d.is_zero() {
                return Err(Error::Parse(format!("zero denominator in {text:?}")));
            }
            Ok(Rational::new(p, d))
        }
    }
}

/// `p/q`, or `p` for integers. Sign always sits on the numerator.
pub fn fmt_rational(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Coefficient display used for linear forms: `3a2`, `-a3`, `1/4a5`.
pub(crate) fn fmt_term(coeff: &Rational, var: &str, first: bool) -> String {
    let sign = if coeff.is_negative() {
        if first {
            "-"
        } else {
            " - "
        }
    } else if first {
        ""
    } else {
        " + "
    };
    let mag = coeff.abs();
    if var.is_empty() {
        format!("{sign}{}", fmt_rational(&mag))
    } else if mag.is_one() {
        format!("{sign}{var}")
    } else if mag.denom().is_one() {
        format!("{sign}{}{var}", mag.numer())
    } else {
        format!("{sign}({}){var}", fmt_rational(&mag))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_and_reduces() {
        assert_eq!(parse_rational("2/4").unwrap(), q(1, 2));
        assert_eq!(parse_rational(" -33/4 ").unwrap(), q(-33, 4));
        assert_eq!(parse_rational("7").unwrap(), int(7));
        assert_eq!(parse_rational("-0").unwrap(), int(0));
    }

    #[test]
    fn rejects_garbage() {
        for s in ["", "1/0", "a", "1.5", "1/2/3", "/3"] {
            assert!(parse_rational(s).is_err(), "{s}");
        }
    }

    #[test]
    fn formats_canonically() {
        assert_eq!(fmt_rational(&q(-2, 8)), "-1/4");
        assert_eq!(fmt_rational(&int(3)), "3");
        assert_eq!(fmt_rational(&q(6, -4)), "-3/2");
    }
}
