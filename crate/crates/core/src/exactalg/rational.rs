//! Arbitrary-precision rationals and their `{"num": .., "den": ..}` JSON form.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// Exact rational, always in lowest terms with positive denominator.
pub type Rational = BigRational;

pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn int(v: i64) -> Rational {
    Rational::from_integer(BigInt::from(v))
}

pub fn big(v: &BigInt) -> Rational {
    Rational::from_integer(v.clone())
}

/// `base^exp` for a possibly negative exponent.
pub fn pow_i(base: u64, exp: i64) -> Rational {
    let b = BigInt::from(base);
    let mag = num_traits::pow(b, exp.unsigned_abs() as usize);
    if exp >= 0 {
        Rational::from_integer(mag)
    } else {
        Rational::new(BigInt::one(), mag)
    }
}

pub fn abs(r: &Rational) -> Rational {
    r.abs()
}

pub fn max(a: Rational, b: Rational) -> Rational {
    if a >= b {
        a
    } else {
        b
    }
}

pub fn is_nonneg(r: &Rational) -> bool {
    !r.is_negative()
}

/// Lossy conversion for reporting only.
pub fn to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum IntRepr {
    Small(i64),
    Text(String),
}

impl IntRepr {
    fn of(v: &BigInt) -> Self {
        match v.to_i64() {
            Some(s) => IntRepr::Small(s),
            None => IntRepr::Text(v.to_string()),
        }
    }

    fn value<E: serde::de::Error>(self) -> Result<BigInt, E> {
        match self {
            IntRepr::Small(s) => Ok(BigInt::from(s)),
            IntRepr::Text(t) => t.parse().map_err(|_| E::custom(format!("bad integer {t:?}"))),
        }
    }
}

/// JSON shape of a rational. Integers beyond `i64` are written as strings.
#[derive(Serialize, Deserialize)]
pub struct RationalRepr {
    num: IntRepr,
    den: IntRepr,
}

impl From<&Rational> for RationalRepr {
    fn from(r: &Rational) -> Self {
        RationalRepr {
            num: IntRepr::of(r.numer()),
            den: IntRepr::of(r.denom()),
        }
    }
}

impl RationalRepr {
    pub fn into_rational<E: serde::de::Error>(self) -> Result<Rational, E> {
        let num = self.num.value::<E>()?;
        let den = self.den.value::<E>()?;
        if den.is_zero() {
            return Err(E::custom("zero denominator"));
        }
        Ok(Rational::new(num, den))
    }
}

/// Serde adapter for a single [`Rational`] field.
pub mod serde_rational {
    use super::*;

    pub fn serialize<S: Serializer>(r: &Rational, s: S) -> Result<S::Ok, S::Error> {
        RationalRepr::from(r).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        RationalRepr::deserialize(d)?.into_rational()
    }
}

/// Serde adapter for `Vec<Rational>`.
pub mod serde_rational_vec {
    use super::*;

    pub fn serialize<S: Serializer>(v: &[Rational], s: S) -> Result<S::Ok, S::Error> {
        let reprs: Vec<RationalRepr> = v.iter().map(RationalRepr::from).collect();
        reprs.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Rational>, D::Error> {
        let reprs = Vec::<RationalRepr>::deserialize(d)?;
        reprs.into_iter().map(|r| r.into_rational()).collect()
    }
}

/// Serde adapter for `Option<Rational>`.
pub mod serde_rational_opt {
    use super::*;

    pub fn serialize<S: Serializer>(v: &Option<Rational>, s: S) -> Result<S::Ok, S::Error> {
        v.as_ref().map(RationalRepr::from).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<Rational>, D::Error> {
        match Option::<RationalRepr>::deserialize(d)? {
            Some(r) => r.into_rational().map(Some),
            None => Ok(None),
        }
    }
}

/// Serde adapter for a single `BigInt`: a JSON number when it fits in `i64`,
/// a decimal string otherwise.
pub mod serde_bigint {
    use super::*;

    pub fn serialize<S: Serializer>(v: &BigInt, s: S) -> Result<S::Ok, S::Error> {
        IntRepr::of(v).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigInt, D::Error> {
        IntRepr::deserialize(d)?.value()
    }
}

/// Serde adapter for `Vec<BigInt>`, using the same integer encoding.
pub mod serde_bigint_vec {
    use super::*;

    pub fn serialize<S: Serializer>(v: &[BigInt], s: S) -> Result<S::Ok, S::Error> {
        let reprs: Vec<IntRepr> = v.iter().map(IntRepr::of).collect();
        reprs.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<BigInt>, D::Error> {
        let reprs = Vec::<IntRepr>::deserialize(d)?;
        reprs.into_iter().map(|r| r.value()).collect()
    }
}

/// Serialize a rational to a JSON value.
pub fn to_json(r: &Rational) -> serde_json::Value {
    serde_json::to_value(RationalRepr::from(r)).expect("rational serializes")
}

pub fn from_json(v: &serde_json::Value) -> Result<Rational, serde_json::Error> {
    let repr = RationalRepr::deserialize(v)?;
    repr.into_rational::<serde_json::Error>()
        .map_err(serde_json::Error::custom)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lowest_terms_and_sign() {
        let r = rat(6, -4);
        assert_eq!(r.numer(), &BigInt::from(-3));
        assert_eq!(r.denom(), &BigInt::from(2));
    }

    #[test]
    fn json_shape() {
        assert_eq!(to_json(&rat(27, 4)).to_string(), r#"{"num":27,"den":4}"#);
        let huge = pow_i(10, 30) + rat(1, 3);
        let back = from_json(&to_json(&huge)).unwrap();
        assert_eq!(back, huge);
        assert!(from_json(&serde_json::json!({"num": 1, "den": 0})).is_err());
    }

    #[test]
    fn negative_powers() {
        assert_eq!(pow_i(5, -2), rat(1, 25));
        assert_eq!(pow_i(5, 0), int(1));
    }
}
