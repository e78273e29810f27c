//! Exact rationals.
//!
//! Backed by [`num_rational::BigRational`], which keeps every value in lowest
//! terms with a positive denominator.

use alloc::string::String;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub type Rat = num_rational::BigRational;

pub fn rat(numer: i64, denom: i64) -> Rat {
    Rat::new(BigInt::from(numer), BigInt::from(denom))
}

pub fn int(value: i64) -> Rat {
    Rat::from_integer(BigInt::from(value))
}

/// Parses `"p/q"` or `"p"`. Decimal and exponent notation is rejected.
pub fn parse_rat(text: &str) -> Result<Rat> {
    let text = text.trim();
    let (num, den) = match text.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (text, "1"),
    };
    let valid = |s: &str| {
        let digits = s.strip_prefix(['-', '+']).unwrap_or(s);
        !digits.is_empty() && digits.bytes().all(|b| b.is_ascii_digit())
    };
    if !valid(num) || !valid(den) {
        return Err(Error::MalformedRational);
    }
    let num: BigInt = num.parse().map_err(|_| Error::MalformedRational)?;
    let den: BigInt = den.parse().map_err(|_| Error::MalformedRational)?;
    if den.is_zero() {
        return Err(Error::MalformedRational);
    }
    Ok(Rat::new(num, den))
}

/// Canonical text form: `"p/q"`, or `"p"` when `q = 1`.
pub fn format_rat(value: &Rat) -> String {
    use alloc::string::ToString;
    value.to_string()
}

pub fn sign_of(value: &Rat) -> i8 {
    if value.is_positive() {
        1
    } else if value.is_negative() {
        -1
    } else {
        0
    }
}

/// Least common multiple of the denominators.
pub fn common_denominator<'a>(values: impl IntoIterator<Item = &'a Rat>) -> BigInt {
    values
        .into_iter()
        .fold(BigInt::one(), |acc, v| acc.lcm(v.denom()))
}

/// Scales a rational vector to the primitive integer vector on the same ray.
/// The zero vector maps to itself.
pub fn primitive_integer(values: &[Rat]) -> alloc::vec::Vec<BigInt> {
    let den = common_denominator(values);
    let scaled: alloc::vec::Vec<BigInt> = values
        .iter()
        .map(|v| v.numer() * (&den / v.denom()))
        .collect();
    let g = scaled.iter().fold(BigInt::zero(), |acc, v| acc.gcd(v));
    if g.is_zero() {
        return scaled;
    }
    scaled.into_iter().map(|v| v / &g).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_fractions_and_integers() {
        assert_eq!(parse_rat("-1/3").unwrap(), rat(-1, 3));
        assert_eq!(parse_rat("2/4").unwrap(), rat(1, 2));
        assert_eq!(parse_rat("7").unwrap(), int(7));
        assert_eq!(parse_rat(" -2 ").unwrap(), int(-2));
    }

    #[test]
    fn rejects_decimals_and_zero_denominators() {
        for bad in ["0.3", "1e3", "1/0", "", "/2", "a/b", "1//2"] {
            assert_eq!(parse_rat(bad), Err(Error::MalformedRational), "{bad}");
        }
    }

    #[test]
    fn canonical_text() {
        assert_eq!(format_rat(&rat(3, 1)), "3");
        assert_eq!(format_rat(&rat(2, -6)), "-1/3");
    }

    #[test]
    fn primitive_scaling() {
        let v = [rat(1, 2), rat(-3, 4), int(0)];
        let p = primitive_integer(&v);
        assert_eq!(p, [BigInt::from(2), BigInt::from(-3), BigInt::from(0)]);
    }
}
