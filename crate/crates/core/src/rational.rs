//! The exact scalar type and its textual forms.

use alloc::format;
use alloc::string::{String, ToString};
use core::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::Error;

/// Exact fraction in lowest terms with a positive denominator.
pub type Rational = num_rational::BigRational;

/// Builds `numer / denom`. Panics on a zero denominator.
pub fn ratio(numer: i64, denom: i64) -> Rational {
    Rational::new(BigInt::from(numer), BigInt::from(denom))
}

pub fn int(value: i64) -> Rational {
    Rational::from_integer(BigInt::from(value))
}

/// Parses `"p/q"` or an integer string. Whitespace around the parts is not
/// accepted; a zero denominator is rejected.
pub fn parse(text: &str) -> Result<Rational, Error> {
    let bad = || Error::InvalidRational(text.to_string());
    let (numer, denom) = match text.split_once('/') {
        Some((n, d)) => (n, d),
        None => (text, "1"),
    };
    let numer: BigInt = numer.parse().map_err(|_| bad())?;
    let denom: BigInt = denom.parse().map_err(|_| bad())?;
    if denom.is_zero() {
        return Err(bad());
    }
    Ok(Rational::new(numer, denom))
}

/// Displays a rational as `p/q`, always with an explicit denominator.
pub struct Exact<'a>(pub &'a Rational);

impl fmt::Display for Exact<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.0.numer(), self.0.denom())
    }
}

pub fn to_exact_string(value: &Rational) -> String {
    Exact(value).to_string()
}

/// Decimal rendering truncated towards zero after `digits` fractional digits.
pub fn to_decimal(value: &Rational, digits: usize) -> String {
    let negative = value.is_negative();
    let abs = value.abs();
    let (whole, rem) = abs.numer().div_rem(abs.denom());
    let mut out = String::new();
    if negative {
        out.push('-');
    }
    out.push_str(&whole.to_string());
    if digits > 0 {
        out.push('.');
        let mut rem = rem;
        let ten = BigInt::from(10);
        for _ in 0..digits {
            rem *= &ten;
            let (digit, next) = rem.div_rem(abs.denom());
            out.push_str(&digit.to_string());
            rem = next;
        }
    }
    out
}

/// Least common multiple of all denominators.
pub fn common_denominator<'a>(values: impl IntoIterator<Item = &'a Rational>) -> BigInt {
    values
        .into_iter()
        .fold(BigInt::one(), |acc, v| acc.lcm(v.denom()))
}

pub fn mean<'a>(values: impl IntoIterator<Item = &'a Rational>) -> Option<Rational> {
    let mut sum = Rational::zero();
    let mut count = 0i64;
    for v in values {
        sum += v;
        count += 1;
    }
    (count > 0).then(|| sum / int(count))
}

pub(crate) fn fmt_list(values: &[Rational]) -> String {
    let parts: alloc::vec::Vec<String> = values.iter().map(to_exact_string).collect();
    format!("({})", parts.join(", "))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_fractions_and_integers() {
        assert_eq!(parse("1/2").unwrap(), ratio(1, 2));
        assert_eq!(parse("-3").unwrap(), int(-3));
        assert_eq!(parse("4/-8").unwrap(), ratio(-1, 2));
        assert!(parse("1/0").is_err());
        assert!(parse("").is_err());
        assert!(parse("0.5").is_err());
        assert!(parse("1/2/3").is_err());
    }

    #[test]
    fn exact_form_keeps_denominator() {
        assert_eq!(to_exact_string(&int(1)), "1/1");
        assert_eq!(to_exact_string(&ratio(-2, 6)), "-1/3");
    }

    #[test]
    fn decimal_truncates() {
        assert_eq!(to_decimal(&ratio(2, 3), 4), "0.6666");
        assert_eq!(to_decimal(&ratio(-11, 8), 3), "-1.375");
        assert_eq!(to_decimal(&int(5), 0), "5");
    }
}
