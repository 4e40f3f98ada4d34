//! Exact rational numbers and their text form (`"p/q"` or an integer).

use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{parse_error, Result};

pub type Rational = num_rational::BigRational;

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn ratio(numer: i64, denom: i64) -> Rational {
    Rational::new(BigInt::from(numer), BigInt::from(denom))
}

pub fn zero() -> Rational {
    Rational::zero()
}

pub fn one() -> Rational {
    Rational::one()
}

pub fn parse_rational(text: &str) -> Result<Rational> {
    let trimmed = text.trim();
    if let Some((n, d)) = trimmed.split_once('/') {
        let d = BigInt::from_str(d.trim()).map_err(|e| parse_error(format!("{text:?}: {e}")))?;
        if d.is_zero() {
            return Err(parse_error(format!("{text:?}: zero denominator")));
        }
        let n = BigInt::from_str(n.trim()).map_err(|e| parse_error(format!("{text:?}: {e}")))?;
        Ok(Rational::new(n, d))
    } else {
        BigInt::from_str(trimmed)
            .map(Rational::from_integer)
            .map_err(|e| parse_error(format!("{text:?}: {e}")))
    }
}

/// Approximate decimal rendering, for display only.
pub fn to_f64(x: &Rational) -> f64 {
    use num_traits::ToPrimitive;
    x.to_f64().unwrap_or(f64::NAN)
}

/// Square root of a nonnegative rational when it is itself rational.
pub fn rational_sqrt(x: &Rational) -> Option<Rational> {
    if x.is_negative() {
        return None;
    }
    let n = x.numer().sqrt();
    let d = x.denom().sqrt();
    (&n * &n == *x.numer() && &d * &d == *x.denom()).then(|| Rational::new(n, d))
}

/// Serde adapter storing a rational as its `"p/q"` string.
pub mod serde_text {
    use super::{parse_rational, Rational};
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(x: &Rational, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(x)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        let text = String::deserialize(d)?;
        parse_rational(&text).map_err(serde::de::Error::custom)
    }
}

pub mod serde_text_vec {
    use super::{parse_rational, Rational};
    use serde::ser::SerializeSeq;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(xs: &[Rational], s: S) -> Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(xs.len()))?;
        for x in xs {
            seq.serialize_element(&x.to_string())?;
        }
        seq.end()
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Rational>, D::Error> {
        Vec::<String>::deserialize(d)?
            .iter()
            .map(|t| parse_rational(t).map_err(serde::de::Error::custom))
            .collect()
    }
}
