//! Exact rational numbers and their text form.
//!
//! Values are written as integers (`"3"`), terminating decimals (`"2.5"`)
//! or fractions (`"1/3"`); the shortest exact form is chosen. Parsing accepts
//! all three.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Rational = num_rational::BigRational;

pub fn int(v: i64) -> Rational {
    Rational::from_integer(BigInt::from(v))
}

pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn zero() -> Rational {
    Rational::zero()
}

/// Parses `"7"`, `"-2.25"` or `"5/3"`.
pub fn parse(text: &str) -> Result<Rational> {
    let s = text.trim();
    if s.is_empty() {
        return Err(Error::parse("empty rational"));
    }
    let bad = || Error::parse(format!("invalid rational {text:?}"));
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().map_err(|_| bad())?;
        let d: BigInt = d.trim().parse().map_err(|_| bad())?;
        if d.is_zero() {
            return Err(Error::parse(format!("zero denominator in {text:?}")));
        }
        return Ok(Rational::new(n, d));
    }
    if let Some((whole, frac)) = s.split_once('.') {
        let negative = whole.starts_with('-');
        let digits = format!("{}{}", whole.trim_start_matches(['-', '+']), frac);
        if digits.is_empty() || !digits.chars().all(|c| c.is_ascii_digit()) {
            return Err(bad());
        }
        let mut n: BigInt = digits.parse().map_err(|_| bad())?;
        if negative {
            n = -n;
        }
        let d = num_traits::pow(BigInt::from(10), frac.len());
        return Ok(Rational::new(n, d));
    }
    let n: BigInt = s.parse().map_err(|_| bad())?;
    Ok(Rational::from_integer(n))
}

/// Canonical text: integer, terminating decimal, or `p/q`.
pub fn format(value: &Rational) -> String {
    if value.is_integer() {
        return value.numer().to_string();
    }
    match decimal_digits(value.denom()) {
        Some(places) => {
            let scale = num_traits::pow(BigInt::from(10), places);
            let scaled = value.numer() * &scale / value.denom();
            let negative = scaled.is_negative();
            let digits = scaled.abs().to_string();
            let digits = format!("{digits:0>width$}", width = places + 1);
            let (whole, frac) = digits.split_at(digits.len() - places);
            format!("{}{}.{}", if negative { "-" } else { "" }, whole, frac)
        }
        None => format!("{}/{}", value.numer(), value.denom()),
    }
}

/// `p/q` form regardless of whether a decimal exists.
pub fn format_fraction(value: &Rational) -> String {
    if value.is_integer() {
        value.numer().to_string()
    } else {
        format!("{}/{}", value.numer(), value.denom())
    }
}

/// Number of decimal places needed when `denom` only has factors 2 and 5.
fn decimal_digits(denom: &BigInt) -> Option<usize> {
    let mut d = denom.clone();
    let two = BigInt::from(2);
    let five = BigInt::from(5);
    let (mut twos, mut fives) = (0usize, 0usize);
    while d.is_even() {
        d /= &two;
        twos += 1;
    }
    while (&d % &five).is_zero() {
        d /= &five;
        fives += 1;
    }
    d.is_one().then_some(twos.max(fives))
}

pub fn to_f64(value: &Rational) -> f64 {
    value.to_f64().unwrap_or(f64::NAN)
}

/// Converts a slice of rationals to integers over a shared denominator when
/// every scaled magnitude stays below `limit`. Returns the integers and the
/// denominator.
pub fn common_scale(values: &[Rational], limit: i128) -> Option<(Vec<i128>, BigInt)> {
    let mut denom = BigInt::one();
    for v in values {
        denom = denom.lcm(v.denom());
    }
    let mut out = Vec::with_capacity(values.len());
    for v in values {
        let scaled = v.numer() * (&denom / v.denom());
        let x = scaled.to_i128()?;
        if x.abs() > limit {
            return None;
        }
        out.push(x);
    }
    Some((out, denom))
}

/// [`common_scale`] over several slices sharing one denominator.
pub fn common_scale_all(groups: &[&[Rational]], limit: i128) -> Option<(Vec<Vec<i128>>, BigInt)> {
    let flat: Vec<Rational> = groups.iter().flat_map(|g| g.iter().cloned()).collect();
    let (ints, denom) = common_scale(&flat, limit)?;
    let mut out = Vec::with_capacity(groups.len());
    let mut at = 0;
    for g in groups {
        out.push(ints[at..at + g.len()].to_vec());
        at += g.len();
    }
    Some((out, denom))
}

/// Magnitude bound for scaled integers, leaving headroom for sums.
pub const SCALE_LIMIT: i128 = 1 << 90;

pub fn from_scaled(value: i128, denom: &BigInt) -> Rational {
    Rational::new(BigInt::from(value), denom.clone())
}

pub mod serde_text {
    //! `#[serde(with = ...)]` adapter storing a rational as its canonical text.
    use super::{format, parse, Rational};
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(value: &Rational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&format(value))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        let text = String::deserialize(d)?;
        parse(&text).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn formats_shortest_exact_form() {
        assert_eq!(format(&int(3)), "3");
        assert_eq!(format(&ratio(5, 2)), "2.5");
        assert_eq!(format(&ratio(-1, 8)), "-0.125");
        assert_eq!(format(&ratio(1, 3)), "1/3");
        assert_eq!(format(&ratio(7, 20)), "0.35");
    }

    #[test]
    fn parses_all_forms() {
        assert_eq!(parse("3").unwrap(), int(3));
        assert_eq!(parse("2.50").unwrap(), ratio(5, 2));
        assert_eq!(parse("-0.125").unwrap(), ratio(-1, 8));
        assert_eq!(parse("4/6").unwrap(), ratio(2, 3));
        assert!(parse("1/0").is_err());
        assert!(parse("abc").is_err());
        assert!(parse("").is_err());
    }

    #[test]
    fn common_scale_uses_lcm() {
        let (ints, d) = common_scale(&[ratio(1, 2), ratio(1, 3), int(2)], 1 << 60).unwrap();
        assert_eq!(d, BigInt::from(6));
        assert_eq!(ints, vec![3, 2, 12]);
    }

    proptest::proptest! {
        #[test]
        fn text_round_trip(n in -10_000i64..10_000, d in 1i64..2_000) {
            let r = ratio(n, d);
            proptest::prop_assert_eq!(parse(&format(&r)).unwrap(), r.clone());
            proptest::prop_assert_eq!(parse(&format_fraction(&r)).unwrap(), r);
        }
    }
}
