//! Problem loading, the degree cache, and artifact writing.

use std::fs;
use std::path::{Path, PathBuf};
use std::time::{Duration, SystemTime, UNIX_EPOCH};

use serde_json::{json, Map, Value};
use sha2::{Digest, Sha256};
use toric_core::degrees::{degree_sequence, DegreeSequence};
use toric_core::io::{degree_key, parse_degree_csv, problem_from_value, problem_value, write_degree_csv, Problem};
use toric_core::Error;

use crate::Common;

#[derive(Debug)]
pub enum CliError {
    Core(Error),
    Io(String),
}

impl CliError {
    /// 2 for schema violations, 3 for mathematical preconditions, 1 for I/O.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Core(e) if e.is_input_error() => 2,
            CliError::Core(_) => 3,
            CliError::Io(_) => 1,
        }
    }

    pub fn diagnostic(&self, command: &str) -> String {
        let (kind, message) = match self {
            CliError::Core(e) => (if e.is_input_error() { "schema" } else { "precondition" }, e.to_string()),
            CliError::Io(m) => ("io", m.clone()),
        };
        json!({"command": command, "error": kind, "message": message, "exit": self.exit_code()}).to_string()
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;

fn io_err(path: &Path, e: std::io::Error) -> CliError {
    CliError::Io(format!("{}: {e}", path.display()))
}

fn read(path: &Path) -> CliResult<String> {
    fs::read_to_string(path).map_err(|e| io_err(path, e))
}

/// The problem file (if any) with inline flags layered on top, validated
/// through the same schema.
pub fn load_problem(c: &Common) -> CliResult<Problem> {
    let mut obj: Map<String, Value> = match &c.problem {
        Some(path) => match problem_value(&read(path)?)? {
            Value::Object(o) => o,
            _ => return Err(Error::Parse("problem must be an object".into()).into()),
        },
        None => Map::new(),
    };
    if let Some(m) = &c.matrix {
        let v: Value = serde_json::from_str(m).map_err(|e| Error::Parse(format!("--matrix: {e}")))?;
        obj.insert("matrix".into(), v);
    }
    if let Some(v) = &c.variety {
        obj.insert("variety".into(), Value::String(v.clone()));
    }
    if let Some(path) = &c.fan {
        let v: Value = serde_json::from_str(&read(path)?).map_err(|e| Error::Parse(format!("--fan: {e}")))?;
        obj.insert("variety".into(), json!({ "fan": v }));
    }
    if let Some(d) = &c.divisor {
        let v = if d.trim_start().starts_with('[') {
            let coeffs: Value = serde_json::from_str(d).map_err(|e| Error::Parse(format!("--divisor: {e}")))?;
            json!({ "coeffs": coeffs })
        } else {
            Value::String(d.clone())
        };
        obj.insert("divisor".into(), v);
    }
    if let Some(k) = c.k {
        obj.insert("k".into(), json!(k));
    }
    if let Some(n) = c.n {
        obj.insert("N".into(), json!(n));
    }
    if let Some(b) = c.precision_bits {
        obj.insert("precision_bits".into(), json!(b));
    }
    if !c.primes.is_empty() {
        obj.insert("primes".into(), json!(c.primes));
    }
    if !obj.contains_key("matrix") {
        return Err(Error::Parse("no matrix given (use --matrix or --problem)".into()).into());
    }
    Ok(problem_from_value(&Value::Object(obj))?)
}

fn fan_value(p: &Problem) -> Value {
    match &p.variety {
        toric_core::io::Variety::Custom(f) => json!({ "fan": f }),
        v => Value::String(v.name()),
    }
}

pub fn rational_strings(xs: &[num_rational::BigRational]) -> Vec<String> {
    xs.iter().map(toric_core::rational::format_rational).collect()
}

/// Echo of the validated problem for `results.json`.
pub fn problem_json(p: &Problem) -> Value {
    json!({
        "matrix": p.matrix,
        "variety": fan_value(p),
        "divisor": rational_strings(&p.divisor.coeffs),
        "k": p.k,
        "N": p.n,
        "precision_bits": p.precision_bits,
    })
}

fn cache_path(dir: &Path, key: &str) -> PathBuf {
    let digest = Sha256::digest(key.as_bytes());
    dir.join(format!("{}.csv", hex::encode(digest.as_slice())))
}

/// `deg_{D,k}(φⁿ)` for `n = 0..=N`, through the cache when one is given.
pub fn sequence(p: &Problem, k: usize, n: usize, cache: Option<&Path>) -> CliResult<DegreeSequence> {
    let map = p.map()?;
    let Some(dir) = cache else {
        return Ok(degree_sequence(&map, &p.divisor, k, n)?);
    };
    let path = cache_path(dir, &degree_key(&p.matrix, &p.divisor, k));
    if let Ok(text) = fs::read_to_string(&path) {
        if let Ok(terms) = parse_degree_csv(&text) {
            if terms.len() > n {
                let terms = terms[..=n].to_vec();
                return Ok(DegreeSequence { k, matrix: p.matrix.clone(), divisor: p.divisor.clone(), terms });
            }
        }
    }
    let seq = degree_sequence(&map, &p.divisor, k, n)?;
    fs::create_dir_all(dir).map_err(|e| io_err(dir, e))?;
    fs::write(&path, write_degree_csv(&seq.terms)).map_err(|e| io_err(&path, e))?;
    Ok(seq)
}

pub struct Output {
    pub results: Value,
    /// Extra artifacts `(file name, contents)`.
    pub files: Vec<(String, String)>,
}

impl Output {
    pub fn new(results: Value) -> Output {
        Output { results, files: Vec::new() }
    }

    pub fn with(mut self, name: &str, contents: String) -> Output {
        self.files.push((name.to_string(), contents));
        self
    }

    /// `results.json`, the extra artifacts, and `meta.json` holding the
    /// run's timestamps.
    pub fn write(&self, dir: &Path, command: &str, started: SystemTime, elapsed: Duration) -> CliResult<()> {
        fs::create_dir_all(dir).map_err(|e| io_err(dir, e))?;
        let mut doc = Map::new();
        doc.insert("command".into(), Value::String(command.into()));
        doc.insert("result".into(), self.results.clone());
        let text = serde_json::to_string_pretty(&Value::Object(doc)).expect("json") + "\n";
        let path = dir.join("results.json");
        fs::write(&path, text).map_err(|e| io_err(&path, e))?;
        for (name, contents) in &self.files {
            let path = dir.join(name);
            fs::write(&path, contents).map_err(|e| io_err(&path, e))?;
        }
        let meta = json!({
            "command": command,
            "started_unix_ms": started.duration_since(UNIX_EPOCH).map(|d| d.as_millis() as u64).unwrap_or(0),
            "elapsed_ms": elapsed.as_secs_f64() * 1e3,
            "version": env!("CARGO_PKG_VERSION"),
            "artifacts": std::iter::once("results.json".to_string()).chain(self.files.iter().map(|f| f.0.clone())).collect::<Vec<_>>(),
        });
        let path = dir.join("meta.json");
        fs::write(&path, serde_json::to_string_pretty(&meta).expect("json") + "\n").map_err(|e| io_err(&path, e))?;
        Ok(())
    }
}

/// CSV text from a header and rows.
pub fn csv_text<R: AsRef<[String]>>(header: &[&str], rows: &[R]) -> String {
    let mut w = csv::WriterBuilder::new().from_writer(Vec::new());
    w.write_record(header).expect("in-memory write");
    for r in rows {
        w.write_record(r.as_ref()).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8")
}
