//! Distribution file parsing.
//!
//! Accepted forms: `{"p": ["91/100", "1/20", "1/25"]}` or a bare JSON array
//! of strings. Entries are exact rationals (`"a/b"`) or decimal literals
//! given as strings; JSON numbers are rejected because binary floats would
//! silently perturb the exact values.

use num_rational::BigRational;
use serde_json::Value;

use ctrump_core::dist::parse_prob;
use ctrump_core::Dist;

pub fn dist_from_json(v: &Value) -> Result<Dist, String> {
    let arr = match v {
        Value::Array(a) => a,
        Value::Object(m) => {
            let inner = m
                .values()
                .find(|x| x.is_array())
                .ok_or("expected an object with one array field of entries")?;
            inner.as_array().unwrap()
        }
        _ => return Err("expected an array of rational strings".into()),
    };
    let mut entries = Vec::with_capacity(arr.len());
    for x in arr {
        match x {
            Value::String(s) => {
                entries.push(parse_prob(s).map_err(|e| format!("entry `{s}`: {e}"))?)
            }
            Value::Number(n) => {
                return Err(format!(
                    "entry {n} is a JSON number; write it as a string (\"a/b\" or decimal) \
                     to keep it exact"
                ))
            }
            other => return Err(format!("entry {other} is not a string")),
        }
    }
    Dist::new(entries).map_err(|e| e.to_string())
}

pub fn load_dist(path: &str) -> Result<Dist, String> {
    let text = std::fs::read_to_string(path).map_err(|e| format!("{path}: {e}"))?;
    let v: Value = serde_json::from_str(&text).map_err(|e| format!("{path}: {e}"))?;
    dist_from_json(&v).map_err(|e| format!("{path}: {e}"))
}

pub fn opt_rational(v: &Value) -> Result<Option<BigRational>, String> {
    match v {
        Value::Null => Ok(None),
        Value::String(s) => parse_prob(s).map(Some).map_err(|e| format!("`{s}`: {e}")),
        other => Err(format!("{other} is not a rational string")),
    }
}
