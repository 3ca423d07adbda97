//! Rationals as `"p/q"` strings, and matrix literals like `[[2,-1],[1,2]]`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

/// Parse `"p"`, `"p/q"` or a plain decimal like `"-1.25"`.
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let t = s.trim();
    if t.is_empty() {
        return Err(Error::Parse("empty rational".into()));
    }
    if let Some((p, q)) = t.split_once('/') {
        let p = parse_int(p)?;
        let q = parse_int(q)?;
        if q.is_zero() {
            return Err(Error::Parse(format!("zero denominator in {t:?}")));
        }
        return Ok(BigRational::new(p, q));
    }
    if let Some((ip, fp)) = t.split_once('.') {
        if fp.is_empty() || !fp.bytes().all(|b| b.is_ascii_digit()) {
            return Err(Error::Parse(format!("bad decimal {t:?}")));
        }
        let neg = ip.trim_start().starts_with('-');
        let ip = if ip == "-" || ip == "+" || ip.is_empty() { BigInt::zero() } else { parse_int(ip)? };
        let scale = num_traits::pow(BigInt::from(10), fp.len());
        let frac: BigInt = fp.parse().map_err(|_| Error::Parse(format!("bad decimal {t:?}")))?;
        let mag = num_traits::Signed::abs(&ip) * &scale + frac;
        let num = if neg { -mag } else { mag };
        return Ok(BigRational::new(num, scale));
    }
    Ok(BigRational::from_integer(parse_int(t)?))
}

fn parse_int(s: &str) -> Result<BigInt> {
    let t = s.trim();
    let digits = t.strip_prefix(['-', '+']).unwrap_or(t);
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return Err(Error::Parse(format!("bad integer {t:?}")));
    }
    if digits.len() > 100_000 {
        return Err(Error::Parse("integer literal too long".into()));
    }
    t.parse().map_err(|_| Error::Parse(format!("bad integer {t:?}")))
}

/// `"p/q"` in lowest terms, or `"p"` for integers.
pub fn format_rational(x: &BigRational) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// Parse a square integer matrix literal such as `[[2,-1],[1,2]]`.
pub fn parse_matrix(s: &str) -> Result<Vec<Vec<BigInt>>> {
    let v: serde_json::Value = serde_json::from_str(s).map_err(|e| Error::Parse(format!("matrix literal: {e}")))?;
    matrix_from_json(&v)
}

pub fn matrix_from_json(v: &serde_json::Value) -> Result<Vec<Vec<BigInt>>> {
    let rows = v.as_array().ok_or_else(|| Error::Parse("matrix must be a list of rows".into()))?;
    if rows.is_empty() {
        return Err(Error::Dimension("empty matrix".into()));
    }
    let out: Vec<Vec<BigInt>> = rows
        .iter()
        .map(|r| {
            r.as_array()
                .ok_or_else(|| Error::Parse("matrix row must be a list".into()))?
                .iter()
                .map(json_integer)
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<_>>()?;
    let d = out.len();
    if out.iter().any(|r| r.len() != d) {
        return Err(Error::Dimension(format!("matrix must be square ({d} rows)")));
    }
    Ok(out)
}

/// An integer given as a JSON number or a decimal string.
pub fn json_integer(v: &serde_json::Value) -> Result<BigInt> {
    match v {
        serde_json::Value::Number(n) => n
            .as_i64()
            .map(BigInt::from)
            .or_else(|| n.as_u64().map(BigInt::from))
            .ok_or_else(|| Error::Parse(format!("{n} is not an integer"))),
        serde_json::Value::String(s) => parse_int(s),
        other => Err(Error::Parse(format!("expected an integer, got {other}"))),
    }
}

/// A rational given as a JSON integer or a `"p/q"` string.
pub fn json_rational(v: &serde_json::Value) -> Result<BigRational> {
    match v {
        serde_json::Value::String(s) => parse_rational(s),
        serde_json::Value::Number(_) => Ok(BigRational::from_integer(json_integer(v)?)),
        other => Err(Error::Parse(format!("expected a rational, got {other}"))),
    }
}

/// Serde adapters storing rationals as strings.
pub mod serde_str {
    use super::*;
    use serde::{de, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(x: &BigRational, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&format_rational(x))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<BigRational, D::Error> {
        let v = serde_json::Value::deserialize(d)?;
        json_rational(&v).map_err(de::Error::custom)
    }
}

/// Integers as decimal strings.
pub mod serde_int {
    use super::*;
    use serde::{de, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(x: &BigInt, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&x.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<BigInt, D::Error> {
        let v = serde_json::Value::deserialize(d)?;
        json_integer(&v).map_err(de::Error::custom)
    }
}

/// JSON value for an integer: a number when exactly representable in a
/// double, a decimal string otherwise.
pub fn integer_json(x: &BigInt) -> serde_json::Value {
    use num_traits::ToPrimitive;
    match x.to_i64() {
        Some(v) if v.unsigned_abs() <= 1 << 53 => serde_json::Value::from(v),
        _ => serde_json::Value::String(x.to_string()),
    }
}

/// Integer vectors as JSON numbers or decimal strings.
pub mod serde_int_vec {
    use super::*;
    use serde::{de, Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(xs: &[BigInt], s: S) -> std::result::Result<S::Ok, S::Error> {
        xs.iter().map(integer_json).collect::<Vec<_>>().serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Vec<BigInt>, D::Error> {
        let v = Vec::<serde_json::Value>::deserialize(d)?;
        v.iter().map(json_integer).collect::<Result<_>>().map_err(de::Error::custom)
    }
}

/// Integer rows as JSON numbers or decimal strings.
pub mod serde_int_rows {
    use super::*;
    use serde::{de, Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(xs: &[Vec<BigInt>], s: S) -> std::result::Result<S::Ok, S::Error> {
        xs.iter().map(|r| r.iter().map(integer_json).collect::<Vec<_>>()).collect::<Vec<_>>().serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Vec<Vec<BigInt>>, D::Error> {
        let v = Vec::<Vec<serde_json::Value>>::deserialize(d)?;
        v.iter()
            .map(|r| r.iter().map(json_integer).collect::<Result<Vec<_>>>())
            .collect::<Result<_>>()
            .map_err(de::Error::custom)
    }
}

pub mod serde_vec {
    use super::*;
    use serde::{de, ser::SerializeSeq, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(xs: &[BigRational], s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(xs.len()))?;
        for x in xs {
            seq.serialize_element(&format_rational(x))?;
        }
        seq.end()
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Vec<BigRational>, D::Error> {
        let v = Vec::<serde_json::Value>::deserialize(d)?;
        v.iter().map(|x| json_rational(x).map_err(de::Error::custom)).collect()
    }
}

pub mod serde_vec_vec {
    use super::*;
    use serde::{de, ser::SerializeSeq, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(xs: &[Vec<BigRational>], s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(xs.len()))?;
        for row in xs {
            let r: Vec<String> = row.iter().map(format_rational).collect();
            seq.serialize_element(&r)?;
        }
        seq.end()
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Vec<Vec<BigRational>>, D::Error> {
        let v = Vec::<Vec<serde_json::Value>>::deserialize(d)?;
        v.iter()
            .map(|row| row.iter().map(|x| json_rational(x).map_err(de::Error::custom)).collect())
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_round_trip() {
        for s in ["3", "-7/2", "0", "10/4"] {
            let q = parse_rational(s).unwrap();
            assert_eq!(parse_rational(&format_rational(&q)).unwrap(), q);
        }
        assert_eq!(format_rational(&parse_rational("10/4").unwrap()), "5/2");
        assert_eq!(parse_rational("-1.25").unwrap(), BigRational::new(BigInt::from(-5), BigInt::from(4)));
        assert_eq!(parse_rational("-0.5").unwrap(), BigRational::new(BigInt::from(-1), BigInt::from(2)));
    }

    #[test]
    fn rational_rejects_garbage() {
        for s in ["", "1/0", "a", "1/", "--1", "1.", "1.2.3", "+"] {
            assert!(parse_rational(s).is_err(), "{s}");
        }
    }

    #[test]
    fn matrix_literal() {
        let m = parse_matrix("[[2,-1],[1,2]]").unwrap();
        assert_eq!(m[0][1], BigInt::from(-1));
        assert!(parse_matrix("[[1,2]]").is_err());
        assert!(parse_matrix("[]").is_err());
        assert!(parse_matrix("[[1.5]]").is_err());
    }
}
