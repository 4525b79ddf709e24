//! Reports and their deterministic serializations.
//!
//! Two runs over identical inputs and parameters produce byte-identical
//! output: object keys are sorted, numbers are rounded to 12 significant
//! digits and printed in their shortest form, and the only clock-dependent
//! field, the timestamp, is supplied by the caller.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

use serde_json::{json, Map, Value};
use sha2::{Digest, Sha256};

use crate::analysis::{CmMetric, CmTransform, SweepTable, Verdict};
use crate::error::{Error, Result};

pub const TOOL: &str = "hacc";
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
pub const SIGNIFICANT_DIGITS: usize = 12;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InputDigest {
    pub role: String,
    pub path: String,
    pub sha256: String,
}

pub fn digest_file(role: &str, path: &Path) -> Result<InputDigest> {
    let bytes = std::fs::read(path).map_err(|e| Error::io(path, e))?;
    Ok(InputDigest {
        role: role.to_string(),
        path: path.display().to_string(),
        sha256: hex::encode(Sha256::digest(&bytes)),
    })
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Metadata {
    pub inputs: Vec<InputDigest>,
    pub seed: Option<u64>,
    pub rng: Option<String>,
    pub timestamp: Option<String>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Parameter {
    pub value: Value,
    /// Where the value came from: `default`, `argument`, `file:<path>`,
    /// `elicited`, ...
    pub source: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CheckRecord {
    pub metric: CmMetric,
    pub transform: CmTransform,
    pub verdict: Verdict,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Report {
    pub command: String,
    pub metadata: Metadata,
    pub parameters: BTreeMap<String, Parameter>,
    pub metrics: BTreeMap<String, f64>,
    pub elicitation: Option<Value>,
    pub sweeps: Vec<SweepTable>,
    pub checks: Vec<CheckRecord>,
}

/// Rounds to [`SIGNIFICANT_DIGITS`] and prints the shortest decimal that
/// reads back to the rounded value; exponent form outside `[1e-6, 1e15)`.
pub fn render_number(v: f64) -> String {
    if !v.is_finite() {
        return "null".to_string();
    }
    let rounded: f64 = format!("{:.*e}", SIGNIFICANT_DIGITS - 1, v).parse().unwrap_or(v);
    if rounded == 0.0 {
        return "0".to_string();
    }
    let mag = rounded.abs();
    if (1e-6..1e15).contains(&mag) {
        format!("{rounded}")
    } else {
        format!("{rounded:e}")
    }
}

fn write_json(value: &Value, indent: usize, out: &mut String) {
    let pad = |n: usize| "  ".repeat(n);
    match value {
        Value::Null => out.push_str("null"),
        Value::Bool(b) => out.push_str(if *b { "true" } else { "false" }),
        Value::Number(n) => match (n.as_i64(), n.as_u64()) {
            (Some(i), _) => {
                let _ = write!(out, "{i}");
            }
            (_, Some(u)) => {
                let _ = write!(out, "{u}");
            }
            _ => out.push_str(&render_number(n.as_f64().unwrap_or(f64::NAN))),
        },
        Value::String(s) => out.push_str(&Value::String(s.clone()).to_string()),
        Value::Array(items) if items.is_empty() => out.push_str("[]"),
        Value::Array(items) => {
            // rows of plain numbers stay on one line
            if items.iter().all(|v| v.is_number() || v.is_null()) {
                out.push('[');
                for (i, v) in items.iter().enumerate() {
                    if i > 0 {
                        out.push_str(", ");
                    }
                    write_json(v, indent, out);
                }
                out.push(']');
                return;
            }
            out.push_str("[\n");
            for (i, v) in items.iter().enumerate() {
                out.push_str(&pad(indent + 1));
                write_json(v, indent + 1, out);
                out.push_str(if i + 1 < items.len() { ",\n" } else { "\n" });
            }
            out.push_str(&pad(indent));
            out.push(']');
        }
        Value::Object(map) if map.is_empty() => out.push_str("{}"),
        Value::Object(map) => {
            let mut keys: Vec<&String> = map.keys().collect();
            keys.sort();
            out.push_str("{\n");
            for (i, k) in keys.iter().enumerate() {
                out.push_str(&pad(indent + 1));
                out.push_str(&Value::String((*k).clone()).to_string());
                out.push_str(": ");
                write_json(&map[*k], indent + 1, out);
                out.push_str(if i + 1 < keys.len() { ",\n" } else { "\n" });
            }
            out.push_str(&pad(indent));
            out.push('}');
        }
    }
}

/// Pretty JSON with sorted keys and rounded numbers, newline-terminated.
pub fn render_json(value: &Value) -> String {
    let mut out = String::new();
    write_json(value, 0, &mut out);
    out.push('\n');
    out
}

fn number(v: f64) -> Value {
    serde_json::Number::from_f64(v).map_or(Value::Null, Value::Number)
}

fn sweep_json(table: &SweepTable) -> Value {
    let mut header: Vec<&str> = table.axis_names.iter().map(String::as_str).collect();
    header.extend(table.columns.iter().map(String::as_str));
    let rows: Vec<Value> = table
        .rows
        .iter()
        .map(|r| Value::Array(r.point.iter().chain(&r.values).map(|&v| number(v)).collect()))
        .collect();
    json!({ "axes": table.axis_names, "header": header, "rows": rows })
}

fn check_json(c: &CheckRecord) -> Value {
    let mut obj = Map::new();
    obj.insert("property".into(), json!(c.transform.property()));
    obj.insert("metric".into(), json!(c.metric.to_string()));
    obj.insert("transform".into(), json!(c.transform.to_string()));
    match &c.verdict {
        Verdict::Invariant { trials } => {
            obj.insert("invariant".into(), json!(true));
            obj.insert("trials".into(), json!(trials));
        }
        Verdict::Violated(ce) => {
            obj.insert("invariant".into(), json!(false));
            obj.insert(
                "counterexample".into(),
                json!({
                    "original": { "tp": ce.original.tp(), "fn": ce.original.fn_(), "fp": ce.original.fp(), "tn": ce.original.tn() },
                    "transformed": { "tp": ce.transformed.tp(), "fn": ce.transformed.fn_(), "fp": ce.transformed.fp(), "tn": ce.transformed.tn() },
                    "before": number(ce.before),
                    "after": number(ce.after),
                }),
            );
        }
    }
    Value::Object(obj)
}

impl Report {
    pub fn new(command: &str) -> Self {
        Report { command: command.to_string(), ..Default::default() }
    }

    pub fn set_parameter(&mut self, name: &str, value: Value, source: impl Into<String>) {
        self.parameters.insert(name.to_string(), Parameter { value, source: source.into() });
    }

    pub fn to_json(&self) -> Value {
        let m = &self.metadata;
        let inputs: Vec<Value> =
            m.inputs.iter().map(|d| json!({ "role": d.role, "path": d.path, "sha256": d.sha256 })).collect();
        let parameters: Map<String, Value> =
            self.parameters.iter().map(|(k, p)| (k.clone(), json!({ "value": p.value, "source": p.source }))).collect();
        let metrics: Map<String, Value> = self.metrics.iter().map(|(k, &v)| (k.clone(), number(v))).collect();
        let sweeps: Map<String, Value> = self.sweeps.iter().map(|t| (t.name.clone(), sweep_json(t))).collect();
        json!({
            "metadata": {
                "tool": TOOL,
                "version": VERSION,
                "command": self.command,
                "inputs": inputs,
                "seed": m.seed,
                "rng": m.rng,
                "timestamp": m.timestamp,
            },
            "parameters": parameters,
            "metrics": metrics,
            "elicitation": self.elicitation,
            "sweeps": sweeps,
            "checks": self.checks.iter().map(check_json).collect::<Vec<_>>(),
        })
    }

    pub fn render_json(&self) -> String {
        render_json(&self.to_json())
    }

    /// Tab-separated sections, one `[name]` header per section.
    pub fn render_tsv(&self) -> String {
        let mut out = String::new();
        let m = &self.metadata;
        out.push_str("[metadata]\n");
        let _ = writeln!(out, "tool\t{TOOL}\nversion\t{VERSION}\ncommand\t{}", self.command);
        for d in &m.inputs {
            let _ = writeln!(out, "input\t{}\t{}\t{}", d.role, d.path, d.sha256);
        }
        if let Some(seed) = m.seed {
            let _ = writeln!(out, "seed\t{seed}");
        }
        if let Some(rng) = &m.rng {
            let _ = writeln!(out, "rng\t{rng}");
        }
        if let Some(ts) = &m.timestamp {
            let _ = writeln!(out, "timestamp\t{ts}");
        }
        if !self.parameters.is_empty() {
            out.push_str("\n[parameters]\nname\tvalue\tsource\n");
            for (k, p) in &self.parameters {
                let mut value = render_json(&p.value);
                value.pop();
                let value = value.split_whitespace().collect::<Vec<_>>().join(" ");
                let _ = writeln!(out, "{k}\t{value}\t{}", p.source);
            }
        }
        if !self.metrics.is_empty() {
            out.push_str("\n[metrics]\nmetric\tvalue\n");
            for (k, &v) in &self.metrics {
                let _ = writeln!(out, "{k}\t{}", render_number(v));
            }
        }
        if let Some(e) = &self.elicitation {
            let mut text = render_json(e);
            text.pop();
            let _ = writeln!(out, "\n[elicitation]\n{}", text.split_whitespace().collect::<Vec<_>>().join(" "));
        }
        for t in &self.sweeps {
            let _ = writeln!(out, "\n[sweep {}]", t.name);
            let header: Vec<&str> = t.axis_names.iter().chain(&t.columns).map(String::as_str).collect();
            let _ = writeln!(out, "{}", header.join("\t"));
            for r in &t.rows {
                let cells: Vec<String> = r.point.iter().chain(&r.values).map(|&v| render_number(v)).collect();
                let _ = writeln!(out, "{}", cells.join("\t"));
            }
        }
        if !self.checks.is_empty() {
            out.push_str("\n[checks]\nproperty\tmetric\ttransform\tinvariant\n");
            for c in &self.checks {
                let _ = writeln!(
                    out,
                    "{}\t{}\t{}\t{}",
                    c.transform.property(),
                    c.metric,
                    c.transform,
                    c.verdict.is_invariant()
                );
            }
        }
        out
    }
}
