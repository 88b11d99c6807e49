//! Exact rational arithmetic helpers.
//!
//! Every numeric quantity in the crate (weights, utilities, scores, prices,
//! times) is a [`Rational`]. Text form is `"p/q"` in lowest terms, or `"p"`
//! when the denominator is one.

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serializer};

pub type Rational = num_rational::BigRational;

pub fn int(v: i64) -> Rational {
    Rational::from_integer(BigInt::from(v))
}

pub fn ratio(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn from_usize(v: usize) -> Rational {
    Rational::from_integer(BigInt::from(v))
}

pub fn zero() -> Rational {
    Rational::zero()
}

pub fn one() -> Rational {
    Rational::one()
}

/// Harmonic number `H(k) = 1 + 1/2 + ... + 1/k`, with `H(0) = 0`.
pub fn harmonic(k: usize) -> Rational {
    (1..=k).fold(zero(), |acc, j| acc + ratio(1, j as i64))
}

pub fn floor_to_usize(v: &Rational) -> Option<usize> {
    if v.is_negative() {
        return None;
    }
    v.floor().to_integer().to_usize()
}

pub fn format(v: &Rational) -> String {
    v.to_string()
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("invalid rational {0:?}: expected \"p/q\" or \"p\"")]
pub struct ParseRationalError(pub String);

pub fn parse(s: &str) -> Result<Rational, ParseRationalError> {
    let t = s.trim();
    let parsed = match t.split_once('/') {
        Some((p, q)) => {
            let p: BigInt = p.trim().parse().map_err(|_| ParseRationalError(s.into()))?;
            let q: BigInt = q.trim().parse().map_err(|_| ParseRationalError(s.into()))?;
            if q.is_zero() {
                return Err(ParseRationalError(s.into()));
            }
            Rational::new(p, q)
        }
        None => Rational::from_integer(t.parse().map_err(|_| ParseRationalError(s.into()))?),
    };
    Ok(parsed)
}

/// Serde adapter writing rationals as `"p/q"` strings.
pub mod serde_str {
    use super::*;

    pub fn serialize<S: Serializer>(v: &Rational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&format(v))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        let raw = String::deserialize(d)?;
        parse(&raw).map_err(serde::de::Error::custom)
    }
}

pub mod serde_str_vec {
    use super::*;
    use serde::ser::SerializeSeq;

    pub fn serialize<S: Serializer>(v: &[Rational], s: S) -> Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(v.len()))?;
        for x in v {
            seq.serialize_element(&format(x))?;
        }
        seq.end()
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Rational>, D::Error> {
        let raw = Vec::<String>::deserialize(d)?;
        raw.iter()
            .map(|r| parse(r).map_err(serde::de::Error::custom))
            .collect()
    }
}

pub mod serde_str_opt {
    use super::*;

    pub fn serialize<S: Serializer>(v: &Option<Rational>, s: S) -> Result<S::Ok, S::Error> {
        match v {
            Some(x) => s.serialize_some(&format(x)),
            None => s.serialize_none(),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<Rational>, D::Error> {
        let raw = Option::<String>::deserialize(d)?;
        raw.map(|r| parse(&r).map_err(serde::de::Error::custom))
            .transpose()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn harmonic_values() {
        assert_eq!(harmonic(0), zero());
        assert_eq!(harmonic(3), ratio(11, 6));
    }

    #[test]
    fn text_form_is_lowest_terms() {
        assert_eq!(format(&ratio(30, 4)), "15/2");
        assert_eq!(format(&int(7)), "7");
        assert_eq!(parse("30/4").unwrap(), ratio(15, 2));
        assert_eq!(parse(" 3 ").unwrap(), int(3));
        assert!(parse("1/0").is_err());
        assert!(parse("x").is_err());
    }

    #[test]
    fn floor_conversion() {
        assert_eq!(floor_to_usize(&ratio(7, 2)), Some(3));
        assert_eq!(floor_to_usize(&ratio(-1, 2)), None);
    }
}
