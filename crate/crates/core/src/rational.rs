//! Exact rational scalars and their text encoding.
//!
//! Every identity in this crate is checked with exact arithmetic, so the
//! working scalar is an arbitrary-precision rational. Values are written to
//! files as `"num/den"` strings (or plain integers) and may be read back from
//! either that form or a finite decimal literal such as `"0.125"`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

pub type Rational = BigRational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("cannot parse `{literal}` as an exact rational: {reason}")]
pub struct ParseRationalError {
    pub literal: String,
    pub reason: &'static str,
}

fn parse_err(literal: &str, reason: &'static str) -> ParseRationalError {
    ParseRationalError {
        literal: literal.to_string(),
        reason,
    }
}

/// Parses `"a/b"`, `"a"`, or a decimal literal like `"-0.375"` exactly.
pub fn parse_rational(literal: &str) -> Result<Rational, ParseRationalError> {
    let s = literal.trim();
    if s.is_empty() {
        return Err(parse_err(literal, "empty literal"));
    }
    if let Some((num, den)) = s.split_once('/') {
        let num: BigInt = num
            .trim()
            .parse()
            .map_err(|_| parse_err(literal, "bad numerator"))?;
        let den: BigInt = den
            .trim()
            .parse()
            .map_err(|_| parse_err(literal, "bad denominator"))?;
        if den.is_zero() {
            return Err(parse_err(literal, "zero denominator"));
        }
        return Ok(Rational::new(num, den));
    }
    let (negative, body) = match s.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, s.strip_prefix('+').unwrap_or(s)),
    };
    let (int_part, frac_part) = body.split_once('.').unwrap_or((body, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(parse_err(literal, "no digits"));
    }
    if !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit()) {
        return Err(parse_err(literal, "expected digits, `.` or `/`"));
    }
    let digits = format!("{int_part}{frac_part}");
    let num: BigInt = if digits.is_empty() {
        BigInt::zero()
    } else {
        digits.parse().map_err(|_| parse_err(literal, "bad digits"))?
    };
    let den = num_traits::pow(BigInt::from(10u32), frac_part.len());
    let value = Rational::new(num, den);
    Ok(if negative { -value } else { value })
}

/// Canonical `"num/den"` encoding; integers are written without a denominator.
pub fn format_rational(value: &Rational) -> String {
    if value.denom().is_one() {
        value.numer().to_string()
    } else {
        format!("{}/{}", value.numer(), value.denom())
    }
}

pub fn to_f64(value: &Rational) -> f64 {
    value.to_f64().unwrap_or_else(|| {
        if value.is_negative() {
            f64::NEG_INFINITY
        } else {
            f64::INFINITY
        }
    })
}

/// Exact rational image of a finite float. Panics on NaN or infinity.
pub fn from_f64(value: f64) -> Rational {
    Rational::from_float(value).expect("finite float")
}

pub fn int(value: i64) -> Rational {
    Rational::from_integer(BigInt::from(value))
}

pub fn ratio(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// Smallest integer `>= value`.
pub fn ceil_to_u64(value: &Rational) -> u64 {
    value.ceil().to_integer().to_u64().unwrap_or(u64::MAX)
}

pub fn min_ref<'a>(a: &'a Rational, b: &'a Rational) -> &'a Rational {
    if b < a {
        b
    } else {
        a
    }
}

pub fn clamp_unit(value: Rational) -> Rational {
    if value.is_negative() {
        Rational::zero()
    } else if value > Rational::one() {
        Rational::one()
    } else {
        value
    }
}

/// Serde adapters for fields holding rationals as `"num/den"` strings.
pub mod serde_rational {
    use super::{format_rational, parse_rational, Rational};
    use serde::{de::Error, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(value: &Rational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&format_rational(value))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        let text = String::deserialize(d)?;
        parse_rational(&text).map_err(D::Error::custom)
    }

    pub mod vec {
        use super::super::{format_rational, parse_rational, Rational};
        use serde::{de::Error, ser::SerializeSeq, Deserialize, Deserializer, Serializer};

        pub fn serialize<S: Serializer>(values: &[Rational], s: S) -> Result<S::Ok, S::Error> {
            let mut seq = s.serialize_seq(Some(values.len()))?;
            for v in values {
                seq.serialize_element(&format_rational(v))?;
            }
            seq.end()
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Rational>, D::Error> {
            let texts = Vec::<String>::deserialize(d)?;
            texts
                .iter()
                .map(|t| parse_rational(t).map_err(D::Error::custom))
                .collect()
        }
    }

    pub mod option {
        use super::super::{format_rational, parse_rational, Rational};
        use serde::{de::Error, Deserialize, Deserializer, Serializer};

        pub fn serialize<S: Serializer>(value: &Option<Rational>, s: S) -> Result<S::Ok, S::Error> {
            match value {
                Some(v) => s.serialize_some(&format_rational(v)),
                None => s.serialize_none(),
            }
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<Rational>, D::Error> {
            Option::<String>::deserialize(d)?
                .map(|t| parse_rational(&t).map_err(D::Error::custom))
                .transpose()
        }
    }
}
