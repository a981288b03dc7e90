//! Matrix interchange.
//!
//! * JSON matrix: `{"m": 2, "n": 2, "entries": [[1, "1/2"], [0, 3]]}`;
//!   entries are JSON numbers or `"p/q"` strings. An optional `"meta"`
//!   object is carried along untouched.
//! * JSON hypergraph: `{"vertices": 4, "edges": [[1, 2], [2, 3, 4]]}` with
//!   1-based vertex indices, converted to its 0/1 incidence matrix.
//! * CSV: one row per line, comma separated; blank lines and lines starting
//!   with `#` are skipped.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use num_traits::{One, Zero};
use serde_json::{json, Map, Value};

use crate::error::{Error, Result};
use crate::matrix::{format_rational, parse_rational, Matrix, Rational};

pub fn read_matrix(path: &Path) -> Result<Matrix> {
    let text = fs::read_to_string(path)?;
    let is_json = path.extension().is_some_and(|e| e.eq_ignore_ascii_case("json"))
        || text.trim_start().starts_with('{');
    if is_json {
        parse_json(&text)
    } else {
        parse_csv(&text)
    }
}

pub fn parse_json(text: &str) -> Result<Matrix> {
    let v: Value = serde_json::from_str(text)?;
    let obj = v
        .as_object()
        .ok_or_else(|| Error::Parse("matrix file must be a JSON object".into()))?;
    if obj.contains_key("edges") {
        return hypergraph_from_json(obj);
    }
    let rows = obj
        .get("entries")
        .and_then(Value::as_array)
        .ok_or_else(|| Error::Parse("missing \"entries\" array".into()))?;
    let parsed: Vec<Vec<Rational>> = rows
        .iter()
        .map(|row| {
            row.as_array()
                .ok_or_else(|| Error::Parse("each row of \"entries\" must be an array".into()))?
                .iter()
                .map(entry_from_json)
                .collect()
        })
        .collect::<Result<_>>()?;
    let n = match obj.get("n") {
        Some(n) => as_usize(n, "n")?,
        None => parsed.first().map_or(0, Vec::len),
    };
    if let Some(m) = obj.get("m") {
        let m = as_usize(m, "m")?;
        if m != parsed.len() {
            return Err(Error::Dimension {
                expected: m,
                got: parsed.len(),
            });
        }
    }
    Matrix::new(parsed, n)
}

fn as_usize(v: &Value, name: &str) -> Result<usize> {
    v.as_u64()
        .and_then(|x| usize::try_from(x).ok())
        .ok_or_else(|| Error::Parse(format!("\"{name}\" must be a non-negative integer")))
}

fn entry_from_json(v: &Value) -> Result<Rational> {
    match v {
        Value::Number(num) => parse_rational(&num.to_string()),
        Value::String(s) => parse_rational(s),
        other => Err(Error::Parse(format!("bad matrix entry {other}"))),
    }
}

fn hypergraph_from_json(obj: &Map<String, Value>) -> Result<Matrix> {
    let vertices = as_usize(
        obj.get("vertices")
            .ok_or_else(|| Error::Parse("hypergraph needs \"vertices\"".into()))?,
        "vertices",
    )?;
    let edges = obj
        .get("edges")
        .and_then(Value::as_array)
        .ok_or_else(|| Error::Parse("\"edges\" must be an array".into()))?;
    let rows = edges
        .iter()
        .map(|e| {
            let mut row = vec![Rational::zero(); vertices];
            for v in e
                .as_array()
                .ok_or_else(|| Error::Parse("each edge must be an array".into()))?
            {
                let idx = as_usize(v, "vertex")?;
                if idx == 0 || idx > vertices {
                    return Err(Error::input(format!(
                        "vertex {idx} out of range 1..={vertices}"
                    )));
                }
                row[idx - 1] = Rational::one();
            }
            Ok(row)
        })
        .collect::<Result<Vec<_>>>()?;
    Matrix::new(rows, vertices)
}

pub fn parse_csv(text: &str) -> Result<Matrix> {
    let rows: Vec<Vec<Rational>> = text
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .map(|l| l.split(',').map(parse_rational).collect())
        .collect::<Result<_>>()?;
    let n = rows.first().map_or(0, Vec::len);
    Matrix::new(rows, n)
}

fn entry_to_json(r: &Rational) -> Value {
    if r.is_integer() {
        if let Ok(v) = r.to_integer().to_string().parse::<i64>() {
            return json!(v);
        }
    }
    json!(format_rational(r))
}

/// Standard matrix JSON, with an optional `"meta"` block.
pub fn matrix_to_json(a: &Matrix, meta: Option<&BTreeMap<String, String>>) -> Value {
    let entries: Vec<Value> = (0..a.rows())
        .map(|i| Value::Array(a.row(i).iter().map(entry_to_json).collect()))
        .collect();
    let mut obj = Map::new();
    obj.insert("m".into(), json!(a.rows()));
    obj.insert("n".into(), json!(a.cols()));
    obj.insert("entries".into(), Value::Array(entries));
    if let Some(meta) = meta {
        obj.insert("meta".into(), json!(meta));
    }
    Value::Object(obj)
}

pub fn write_matrix(path: &Path, a: &Matrix, meta: Option<&BTreeMap<String, String>>) -> Result<()> {
    let text = serde_json::to_string_pretty(&matrix_to_json(a, meta))?;
    fs::write(path, text + "\n")?;
    Ok(())
}
