//! Exact rationals and their string encoding.
//!
//! Every coefficient and pairing in the crate is a [`Rational`]. On the wire a
//! rational is a string `"p/q"`, or `"p"` when the denominator is one.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use std::str::FromStr;

pub type Rational = num_rational::BigRational;

/// Integer as a rational.
pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// `num / den` in lowest terms. Panics on a zero denominator.
pub fn frac(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn is_integer(q: &Rational) -> bool {
    q.denom().is_one()
}

/// True when `q` is an integer divisible by two.
pub fn is_even_integer(q: &Rational) -> bool {
    is_integer(q) && (q.numer() % BigInt::from(2)).is_zero()
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("invalid rational literal {0:?}")]
pub struct ParseRationalError(pub String);

/// Parse `"p"`, `"p/q"` or `"-p/q"`. The result is reduced.
pub fn parse_rational(s: &str) -> Result<Rational, ParseRationalError> {
    let trimmed = s.trim();
    let err = || ParseRationalError(s.to_string());
    match trimmed.split_once('/') {
        Some((n, d)) => {
            let n = BigInt::from_str(n.trim()).map_err(|_| err())?;
            let d = BigInt::from_str(d.trim()).map_err(|_| err())?;
            if d.is_zero() {
                return Err(err());
            }
            Ok(Rational::new(n, d))
        }
        None => BigInt::from_str(trimmed)
            .map(Rational::from_integer)
            .map_err(|_| err()),
    }
}

pub fn to_string(q: &Rational) -> String {
    // BigRational's Display already prints "p" for integers and "p/q" otherwise.
    q.to_string()
}

/// Serde adapters that encode rationals as exact strings.
///
/// Deserialization also accepts plain JSON integers.
pub mod serde_str {
    use super::{parse_rational, Rational};
    use num_bigint::BigInt;
    use serde::de::{self, Deserializer, Visitor};
    use serde::Serializer;
    use std::fmt;

    pub fn serialize<S: Serializer>(q: &Rational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&q.to_string())
    }

    struct RationalVisitor;

    impl<'de> Visitor<'de> for RationalVisitor {
        type Value = Rational;

        fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
            f.write_str("a rational as \"p/q\" or an integer")
        }

        fn visit_str<E: de::Error>(self, v: &str) -> Result<Rational, E> {
            parse_rational(v).map_err(E::custom)
        }

        fn visit_i64<E: de::Error>(self, v: i64) -> Result<Rational, E> {
            Ok(Rational::from_integer(BigInt::from(v)))
        }

        fn visit_u64<E: de::Error>(self, v: u64) -> Result<Rational, E> {
            Ok(Rational::from_integer(BigInt::from(v)))
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        d.deserialize_any(RationalVisitor)
    }

    #[derive(serde::Serialize, serde::Deserialize)]
    #[serde(transparent)]
    pub(crate) struct Wrapped(#[serde(with = "self")] pub Rational);

    pub mod vec {
        use super::{Rational, Wrapped};
        use serde::{Deserialize, Deserializer, Serialize, Serializer};

        pub fn serialize<S: Serializer>(v: &[Rational], s: S) -> Result<S::Ok, S::Error> {
            let w: Vec<Wrapped> = v.iter().cloned().map(Wrapped).collect();
            w.serialize(s)
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Rational>, D::Error> {
            let w = Vec::<Wrapped>::deserialize(d)?;
            Ok(w.into_iter().map(|x| x.0).collect())
        }
    }

    pub mod matrix {
        use super::{Rational, Wrapped};
        use serde::{Deserialize, Deserializer, Serialize, Serializer};

        pub fn serialize<S: Serializer>(m: &[Vec<Rational>], s: S) -> Result<S::Ok, S::Error> {
            let w: Vec<Vec<Wrapped>> = m
                .iter()
                .map(|row| row.iter().cloned().map(Wrapped).collect())
                .collect();
            w.serialize(s)
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(
            d: D,
        ) -> Result<Vec<Vec<Rational>>, D::Error> {
            let w = Vec::<Vec<Wrapped>>::deserialize(d)?;
            Ok(w
                .into_iter()
                .map(|row| row.into_iter().map(|x| x.0).collect())
                .collect())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_and_reduces() {
        assert_eq!(parse_rational("6/4").unwrap(), frac(3, 2));
        assert_eq!(parse_rational("-7").unwrap(), rat(-7));
        assert_eq!(parse_rational(" 2/-4 ").unwrap(), frac(-1, 2));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("0.5").is_err());
        assert!(parse_rational("").is_err());
    }

    #[test]
    fn prints_exact() {
        assert_eq!(to_string(&frac(4, 2)), "2");
        assert_eq!(to_string(&frac(-3, 6)), "-1/2");
    }

    #[test]
    fn evenness() {
        assert!(is_even_integer(&rat(-4)));
        assert!(!is_even_integer(&rat(3)));
        assert!(!is_even_integer(&frac(4, 3)));
    }
}
