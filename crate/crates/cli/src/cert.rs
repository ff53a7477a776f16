//! Certificate assembly and emission.
//!
//! A certificate is a single JSON document with a fixed field order:
//! `relation`, `verdict`, `inputs`, `witness`, `checks`, `config`,
//! `tool_version`. All rationals are rendered as exact `"a/b"` strings, so
//! output is byte-identical across runs with the same inputs and options.

use serde::Serialize;
use serde_json::Value;

use ctrump_core::trumping::AlphaCheck;
use ctrump_core::{CtrumpWitness, Dist};

pub type JsonMap = serde_json::Map<String, Value>;

#[derive(Serialize)]
pub struct Inputs {
    pub p: Vec<String>,
    pub q: Vec<String>,
}

#[derive(Serialize)]
pub struct Certificate {
    pub relation: String,
    pub verdict: String,
    pub inputs: Inputs,
    pub witness: Option<Value>,
    pub checks: Value,
    pub config: Value,
    pub tool_version: String,
}

impl Certificate {
    pub fn new(relation: &str, verdict: &str, p: &Dist, q: &Dist) -> Self {
        Self {
            relation: relation.into(),
            verdict: verdict.into(),
            inputs: Inputs { p: p.to_strings(), q: q.to_strings() },
            witness: None,
            checks: Value::Null,
            config: Value::Null,
            tool_version: env!("CARGO_PKG_VERSION").into(),
        }
    }

    pub fn witness(mut self, w: Option<Value>) -> Self {
        self.witness = w;
        self
    }

    pub fn checks(mut self, c: Value) -> Self {
        self.checks = c;
        self
    }

    pub fn config(mut self, c: Value) -> Self {
        self.config = c;
        self
    }

    /// JSON to stdout when requested, otherwise a short human summary.
    pub fn emit(&self, json: bool) {
        if json {
            println!("{}", serde_json::to_string_pretty(self).unwrap());
        } else {
            println!("{}: {}", self.relation, self.verdict);
            if let Value::Object(m) = &self.checks {
                for (k, v) in m {
                    if k == "gaps" {
                        continue; // the full table is JSON-only
                    }
                    println!("  {k}: {v}");
                }
            }
            if self.witness.is_some() {
                println!("  witness: present (use --json to inspect)");
            }
        }
    }
}

pub fn strings(xs: &[String]) -> Value {
    Value::Array(xs.iter().map(|s| Value::String(s.clone())).collect())
}

pub fn note(msg: &str) -> Value {
    let mut m = JsonMap::new();
    m.insert("note".into(), Value::String(msg.into()));
    Value::Object(m)
}

pub fn alpha_checks(checks: &[AlphaCheck]) -> Value {
    Value::Array(
        checks
            .iter()
            .map(|c| {
                let mut m = JsonMap::new();
                m.insert("alpha".into(), Value::String(c.order.label()));
                m.insert("gap".into(), Value::from(c.gap));
                m.insert("strict".into(), Value::Bool(c.strict));
                m.insert("degenerate".into(), Value::Bool(c.degenerate));
                Value::Object(m)
            })
            .collect(),
    )
}

pub fn config_basic(precision: u32, tol: f64) -> Value {
    let mut m = JsonMap::new();
    m.insert("precision".into(), Value::from(precision));
    m.insert("tol".into(), Value::from(tol));
    Value::Object(m)
}

pub fn config_search(precision: u32, tol: f64, budget: u64, seed: u64, n_max: u64) -> Value {
    let mut m = JsonMap::new();
    m.insert("precision".into(), Value::from(precision));
    m.insert("tol".into(), Value::from(tol));
    m.insert("budget".into(), Value::from(budget));
    m.insert("seed".into(), Value::from(seed));
    m.insert("n_max".into(), Value::from(n_max));
    Value::Object(m)
}

fn opt_rat(x: &Option<num_rational::BigRational>) -> Value {
    match x {
        Some(r) => Value::String(r.to_string()),
        None => Value::Null,
    }
}

pub fn ctrump_witness(w: &CtrumpWitness) -> Value {
    let mut m = JsonMap::new();
    m.insert(
        "r_marginals".into(),
        Value::Array(w.r_marginals.iter().map(|d| strings(&d.to_strings())).collect()),
    );
    let mut joint = JsonMap::new();
    joint.insert(
        "shape".into(),
        Value::Array(w.r_joint.shape().iter().map(|&s| Value::from(s)).collect()),
    );
    joint.insert(
        "labels".into(),
        Value::Array(w.r_joint.labels().iter().map(|l| Value::String(l.clone())).collect()),
    );
    joint.insert("dim".into(), Value::from(w.r_joint.dim()));
    m.insert("r_joint".into(), Value::Object(joint));
    m.insert("delta".into(), opt_rat(&w.delta));
    m.insert("n1".into(), Value::from(w.n1));
    m.insert("a".into(), opt_rat(&w.a));
    m.insert("n2".into(), Value::from(w.n2));
    m.insert("epsilon1".into(), w.epsilon1.map(Value::from).unwrap_or(Value::Null));
    m.insert("epsilon2".into(), w.epsilon2.map(Value::from).unwrap_or(Value::Null));
    m.insert(
        "catalyst".into(),
        w.catalyst.as_ref().map(|c| strings(&c.to_strings())).unwrap_or(Value::Null),
    );
    m.insert("checks".into(), alpha_checks(&w.checks));
    m.insert("verified".into(), Value::Bool(w.verified));
    Value::Object(m)
}
