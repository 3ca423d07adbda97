//! Problem files (JSON or TOML) and the degree-sequence CSV format.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;
use serde::Serialize;
use serde_json::{Map, Value};

use crate::degrees::MonomialMap;
use crate::error::{Error, Result};
use crate::linalg::matrix::IntegerMatrix;
use crate::polytope::{Fan, ToricDivisor};
use crate::rational::{format_rational, json_integer, json_rational, matrix_from_json, parse_rational};

/// Largest accepted matrix dimension, sequence length and prime.
pub const MAX_DIM: usize = 8;
pub const MAX_TERMS: usize = 2_000_000;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Variety {
    /// `ℙᵈ`, `d` taken from the matrix.
    Projective(usize),
    P1xP1,
    Custom(#[serde(skip)] Fan),
}

impl Variety {
    pub fn fan(&self) -> Fan {
        match self {
            Variety::Projective(d) => Fan::projective_space(*d),
            Variety::P1xP1 => Fan::p1xp1(),
            Variety::Custom(f) => f.clone(),
        }
    }

    pub fn name(&self) -> String {
        match self {
            Variety::Projective(d) => format!("P{d}"),
            Variety::P1xP1 => "P1xP1".into(),
            Variety::Custom(_) => "fan".into(),
        }
    }
}

/// A validated problem.
#[derive(Clone, Debug)]
pub struct Problem {
    pub matrix: IntegerMatrix,
    pub variety: Variety,
    pub divisor: ToricDivisor,
    pub k: usize,
    pub n: usize,
    pub precision_bits: u32,
    pub primes: Vec<u64>,
    /// Second matrix for semiconjugacy.
    pub matrix_prime: Option<IntegerMatrix>,
    /// Remaining keys, uninterpreted (subcommand options).
    pub extra: Map<String, Value>,
}

impl Problem {
    pub fn map(&self) -> Result<MonomialMap> {
        MonomialMap::new(self.matrix.clone())?.with_fan(self.variety.fan())
    }
}

pub const KNOWN_KEYS: [&str; 8] = ["matrix", "variety", "divisor", "k", "N", "precision_bits", "primes", "matrix_prime"];

pub fn parse_problem_json(s: &str) -> Result<Problem> {
    let v: Value = serde_json::from_str(s).map_err(|e| Error::Parse(format!("problem JSON: {e}")))?;
    problem_from_value(&v)
}

pub fn parse_problem_toml(s: &str) -> Result<Problem> {
    let v: Value = toml::from_str(s).map_err(|e| Error::Parse(format!("problem TOML: {e}")))?;
    problem_from_value(&v)
}

/// JSON when the text starts with `{`, TOML otherwise.
pub fn parse_problem(s: &str) -> Result<Problem> {
    problem_from_value(&problem_value(s)?)
}

/// The unvalidated problem document, from JSON or TOML text.
pub fn problem_value(s: &str) -> Result<Value> {
    if s.trim_start().starts_with('{') {
        serde_json::from_str(s).map_err(|e| Error::Parse(format!("problem JSON: {e}")))
    } else {
        toml::from_str(s).map_err(|e| Error::Parse(format!("problem TOML: {e}")))
    }
}

fn usize_field(obj: &Map<String, Value>, key: &str, default: usize, max: usize) -> Result<usize> {
    match obj.get(key) {
        None => Ok(default),
        Some(v) => {
            let n = v.as_u64().ok_or_else(|| Error::Parse(format!("{key} must be a non-negative integer")))?;
            if n as u128 > max as u128 {
                return Err(Error::OutOfRange(format!("{key} = {n} exceeds {max}")));
            }
            Ok(n as usize)
        }
    }
}

pub fn problem_from_value(v: &Value) -> Result<Problem> {
    let obj = v.as_object().ok_or_else(|| Error::Parse("problem must be an object".into()))?;
    let matrix = parse_square(obj.get("matrix").ok_or_else(|| Error::Parse("missing matrix".into()))?)?;
    let d = matrix.dim();
    let variety = parse_variety(obj.get("variety"), d)?;
    let fan = variety.fan();
    if fan.dim() != d {
        return Err(Error::Dimension(format!("{}-dimensional variety for a {d}x{d} matrix", fan.dim())));
    }
    let divisor = parse_divisor(obj.get("divisor"), &variety)?;
    let k = usize_field(obj, "k", 1, d)?;
    let n = usize_field(obj, "N", 20, MAX_TERMS)?;
    let precision_bits = usize_field(obj, "precision_bits", 128, 4096)? as u32;
    let primes = match obj.get("primes") {
        None => Vec::new(),
        Some(Value::Array(ps)) => ps
            .iter()
            .map(|p| {
                let n = p.as_u64().ok_or_else(|| Error::Parse(format!("prime {p} is not a non-negative integer")))?;
                if !crate::modp::is_prime(n) {
                    return Err(Error::OutOfRange(format!("{n} is not prime")));
                }
                Ok(n)
            })
            .collect::<Result<_>>()?,
        Some(other) => return Err(Error::Parse(format!("primes must be a list, got {other}"))),
    };
    let matrix_prime = obj.get("matrix_prime").map(parse_square).transpose()?;
    if let Some(mp) = &matrix_prime {
        if mp.dim() != d {
            return Err(Error::Dimension("matrix_prime has a different size".into()));
        }
    }
    let extra = obj.iter().filter(|(k, _)| !KNOWN_KEYS.contains(&k.as_str())).map(|(k, v)| (k.clone(), v.clone())).collect();
    Ok(Problem { matrix, variety, divisor, k, n, precision_bits, primes, matrix_prime, extra })
}

pub fn parse_square(v: &Value) -> Result<IntegerMatrix> {
    let rows = matrix_from_json(v)?;
    if rows.len() > MAX_DIM {
        return Err(Error::OutOfRange(format!("dimension {} exceeds {MAX_DIM}", rows.len())));
    }
    IntegerMatrix::new(rows)
}

/// `"Pd"`, `"P<n>"`, `"P1xP1"` or `{fan: {dim, rays, cones}}` (the bare
/// fan object is also accepted).
pub fn parse_variety(v: Option<&Value>, d: usize) -> Result<Variety> {
    match v {
        None => Ok(Variety::Projective(d)),
        Some(Value::String(s)) => match s.as_str() {
            "Pd" | "P^d" => Ok(Variety::Projective(d)),
            "P1xP1" => Ok(Variety::P1xP1),
            other => {
                let n = other
                    .strip_prefix('P')
                    .and_then(|t| t.parse::<usize>().ok())
                    .ok_or_else(|| Error::Parse(format!("unknown variety {other:?}")))?;
                if n == 0 || n > MAX_DIM {
                    return Err(Error::OutOfRange(format!("projective dimension {n}")));
                }
                Ok(Variety::Projective(n))
            }
        },
        Some(Value::Object(o)) => {
            let fan = o.get("fan").unwrap_or(v.unwrap());
            Ok(Variety::Custom(parse_fan(fan)?))
        }
        Some(other) => Err(Error::Parse(format!("variety must be a string or a fan object, got {other}"))),
    }
}

pub fn parse_fan_json(s: &str) -> Result<Fan> {
    let v: Value = serde_json::from_str(s).map_err(|e| Error::Parse(format!("fan JSON: {e}")))?;
    parse_fan(&v)
}

pub fn parse_fan(v: &Value) -> Result<Fan> {
    let o = v.as_object().ok_or_else(|| Error::Parse("fan must be an object".into()))?;
    let dim = o.get("dim").and_then(Value::as_u64).ok_or_else(|| Error::Parse("fan.dim must be a positive integer".into()))?;
    if dim == 0 || dim as usize > MAX_DIM {
        return Err(Error::OutOfRange(format!("fan dimension {dim}")));
    }
    let list = |key: &str| {
        o.get(key).and_then(Value::as_array).ok_or_else(|| Error::Parse(format!("fan.{key} must be a list")))
    };
    let rays = list("rays")?
        .iter()
        .map(|r| {
            r.as_array()
                .ok_or_else(|| Error::Parse("ray must be a list".into()))?
                .iter()
                .map(json_integer)
                .collect::<Result<Vec<BigInt>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    if rays.len() > 64 {
        return Err(Error::OutOfRange(format!("{} rays", rays.len())));
    }
    let cones = list("cones")?
        .iter()
        .map(|c| {
            c.as_array()
                .ok_or_else(|| Error::Parse("cone must be a list".into()))?
                .iter()
                .map(|i| i.as_u64().map(|i| i as usize).ok_or_else(|| Error::Parse("cone index must be an integer".into())))
                .collect::<Result<Vec<usize>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    Fan::new(dim as usize, rays, cones)
}

/// `"O(1)"` (projective space and `ℙ¹×ℙ¹` only) or `{coeffs: [...]}`.
pub fn parse_divisor(v: Option<&Value>, variety: &Variety) -> Result<ToricDivisor> {
    let o1 = || match variety {
        Variety::Projective(d) => Ok(ToricDivisor::o1_projective(*d)),
        Variety::P1xP1 => Ok(ToricDivisor::o11_p1xp1()),
        Variety::Custom(_) => Err(Error::Parse("\"O(1)\" is only defined for Pd and P1xP1; give coeffs".into())),
    };
    match v {
        None => o1(),
        Some(Value::String(s)) if s == "O(1)" || s == "O(1,1)" => o1(),
        Some(Value::Object(o)) => {
            let coeffs = o
                .get("coeffs")
                .and_then(Value::as_array)
                .ok_or_else(|| Error::Parse("divisor.coeffs must be a list".into()))?
                .iter()
                .map(json_rational)
                .collect::<Result<Vec<_>>>()?;
            ToricDivisor::new(variety.fan(), coeffs)
        }
        Some(other) => Err(Error::Parse(format!("divisor must be \"O(1)\" or {{coeffs}}, got {other}"))),
    }
}

/// `n,term` rows with a header.
pub fn write_degree_csv(terms: &[BigRational]) -> String {
    let mut w = csv::WriterBuilder::new().from_writer(Vec::new());
    w.write_record(["n", "term"]).expect("in-memory write");
    for (n, t) in terms.iter().enumerate() {
        w.write_record([n.to_string(), format_rational(t)]).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("ascii")
}

/// Inverse of [`write_degree_csv`]; indices must run `0, 1, 2, ...`.
pub fn parse_degree_csv(s: &str) -> Result<Vec<BigRational>> {
    let mut r = csv::ReaderBuilder::new().has_headers(true).from_reader(s.as_bytes());
    let headers = r.headers().map_err(|e| Error::Parse(format!("csv header: {e}")))?;
    if headers.len() != 2 || &headers[0] != "n" || &headers[1] != "term" {
        return Err(Error::Parse("expected header n,term".into()));
    }
    let mut out = Vec::new();
    for (i, rec) in r.records().enumerate() {
        let rec = rec.map_err(|e| Error::Parse(format!("csv row {i}: {e}")))?;
        if rec.len() != 2 {
            return Err(Error::Parse(format!("csv row {i} has {} fields", rec.len())));
        }
        let n: usize = rec[0].trim().parse().map_err(|_| Error::Parse(format!("bad index {:?}", &rec[0])))?;
        if n != i {
            return Err(Error::Parse(format!("row {i} has index {n}")));
        }
        if out.len() >= MAX_TERMS {
            return Err(Error::OutOfRange("too many rows".into()));
        }
        out.push(parse_rational(&rec[1])?);
    }
    Ok(out)
}

/// Canonical text of a problem's degree inputs, for cache keys.
pub fn degree_key(matrix: &IntegerMatrix, divisor: &ToricDivisor, k: usize) -> String {
    let fan = &divisor.fan;
    let coeffs: Vec<String> = divisor.coeffs.iter().map(format_rational).collect();
    format!("A={matrix};rays={:?};cones={:?};a={coeffs:?};k={k}", fan.rays(), fan.cones())
}

/// Whether every term is `1` at `n = 0` (normalized divisor), used by the
/// BDJ transform precondition.
pub fn starts_with_one(terms: &[BigRational]) -> bool {
    terms.first().is_some_and(|t| t.is_one())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_and_toml_agree() {
        let j = parse_problem_json(r#"{"matrix": [[2,-1],[1,2]], "variety": "P2", "divisor": "O(1)", "k": 1, "N": 5}"#).unwrap();
        let t = parse_problem_toml("matrix = [[2,-1],[1,2]]\nvariety = \"P2\"\ndivisor = \"O(1)\"\nk = 1\nN = 5\n").unwrap();
        assert_eq!(j.matrix, t.matrix);
        assert_eq!(j.divisor, t.divisor);
        assert_eq!((j.k, j.n), (t.k, t.n));
    }

    #[test]
    fn schema_errors() {
        for bad in [
            r#"{"variety": "P2"}"#,
            r#"{"matrix": [[1,2],[3]]}"#,
            r#"{"matrix": [[1]], "variety": "Q7"}"#,
            r#"{"matrix": [[1,0],[0,1]], "k": 3}"#,
            r#"{"matrix": [[1,0],[0,1]], "variety": {"fan": {"dim": 2, "rays": [[1,0],[0,1],[-1,-1]], "cones": [[0,1],[1,2],[2,0]]}}}"#,
        ] {
            assert!(parse_problem_json(bad).unwrap_err().is_input_error(), "{bad}");
        }
        let custom = r#"{"matrix": [[1,0],[0,1]], "variety": {"fan": {"dim": 2, "rays": [[1,0],[0,1],[-1,-1]], "cones": [[0,1],[1,2],[2,0]]}}, "divisor": {"coeffs": [0, 0, "1"]}}"#;
        let p = parse_problem_json(custom).unwrap();
        assert_eq!(p.divisor.coeffs, ToricDivisor::o1_projective(2).coeffs);
    }

    #[test]
    fn csv_round_trip() {
        let terms = vec![BigRational::one(), BigRational::new(3.into(), 2.into()), BigRational::from_integer((-7).into())];
        let text = write_degree_csv(&terms);
        assert_eq!(text, "n,term\n0,1\n1,3/2\n2,-7\n");
        assert_eq!(parse_degree_csv(&text).unwrap(), terms);
        assert!(parse_degree_csv("n,term\n1,2\n").is_err());
    }
}
