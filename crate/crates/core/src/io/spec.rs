//! Textual parameter arguments and parameter files.
//!
//! * tau: a number, or `@file` naming a parameter document with a `tau` key
//! * priorities: `label=w,...`, a preset name, or `@file` holding either a
//!   `{label: w}` object or a parameter document with a `priorities` key
//! * complexity: `const:<v>`, or `@file` holding `instance_id,complexity`
//!   CSV, a `{id: v}` JSON object, or a parameter document with a
//!   `complexity` key
//!
//! A parameter document is what `elicit` writes.

use std::path::Path;

use serde_json::{Map, Value};

use crate::dataset::LabelSet;
use crate::elicitation::{priorities_from_preset, PriorityPreset};
use crate::error::{Error, Result};
use crate::params::{ComplexityAssignment, PriorityVector};

fn read_file(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::io(path, e))
}

fn json_error(e: serde_json::Error) -> Error {
    Error::parse(e.line(), e.to_string())
}

pub fn read_json(path: &Path) -> Result<Value> {
    serde_json::from_str(&read_file(path)?).map_err(json_error)
}

/// The `key` entry of a parameter document, or the whole document when it
/// has no such key.
fn section<'a>(doc: &'a Value, key: &str) -> &'a Value {
    doc.get(key).unwrap_or(doc)
}

fn number_map(value: &Value, what: &str) -> Result<Vec<(String, f64)>> {
    let obj: &Map<String, Value> =
        value.as_object().ok_or_else(|| Error::parse(0, format!("{what} must be a JSON object")))?;
    obj.iter()
        .map(|(k, v)| {
            v.as_f64()
                .map(|x| (k.clone(), x))
                .ok_or_else(|| Error::parse(0, format!("{what} entry `{k}` is not a number")))
        })
        .collect()
}

pub fn parse_tau_arg(arg: &str) -> Result<f64> {
    if let Some(path) = arg.strip_prefix('@') {
        let doc = read_json(Path::new(path))?;
        return doc
            .get("tau")
            .and_then(Value::as_f64)
            .ok_or_else(|| Error::parse(0, format!("`{path}` has no numeric `tau` entry")));
    }
    arg.trim().parse().map_err(|_| Error::InvalidParameter(format!("tau `{arg}` is not a number")))
}

pub fn parse_priorities_arg(arg: &str, labels: &LabelSet) -> Result<PriorityVector> {
    if let Some(path) = arg.strip_prefix('@') {
        let doc = read_json(Path::new(path))?;
        let pairs = number_map(section(&doc, "priorities"), "priorities")?;
        return PriorityVector::from_pairs(labels, pairs.iter().map(|(k, v)| (k.as_str(), *v)));
    }
    if let Ok(preset) = arg.parse::<PriorityPreset>() {
        return priorities_from_preset(preset).to_vector(labels);
    }
    let pairs = arg
        .split(',')
        .map(|part| {
            let (label, w) = part
                .split_once('=')
                .ok_or_else(|| Error::InvalidPriorities(format!("`{part}` is not of the form label=weight")))?;
            let w: f64 = w
                .trim()
                .parse()
                .map_err(|_| Error::InvalidPriorities(format!("weight `{w}` for `{label}` is not a number")))?;
            Ok((label.trim(), w))
        })
        .collect::<Result<Vec<_>>>()?;
    PriorityVector::from_pairs(labels, pairs)
}

pub fn parse_complexity_arg(arg: &str) -> Result<ComplexityAssignment> {
    if let Some(v) = arg.strip_prefix("const:") {
        let v: f64 =
            v.trim().parse().map_err(|_| Error::InvalidComplexity(format!("constant `{v}` is not a number")))?;
        if !(v.is_finite() && v > 0.0) {
            return Err(Error::InvalidComplexity(format!("constant weight must be positive, got {v}")));
        }
        return Ok(ComplexityAssignment::Constant(v));
    }
    let Some(path) = arg.strip_prefix('@') else {
        return Err(Error::InvalidComplexity(format!("expected `const:<v>` or `@file`, got `{arg}`")));
    };
    let text = read_file(Path::new(path))?;
    if text.trim_start().starts_with('{') {
        let doc: Value = serde_json::from_str(&text).map_err(json_error)?;
        ComplexityAssignment::per_instance(number_map(section(&doc, "complexity"), "complexity")?)
    } else {
        read_complexity_csv(&text)
    }
}

/// `instance_id,complexity` rows.
pub fn read_complexity_csv(text: &str) -> Result<ComplexityAssignment> {
    let mut rdr = csv::ReaderBuilder::new().from_reader(text.as_bytes());
    let header = rdr.headers().map_err(|e| Error::parse(1, e.to_string()))?;
    if header.iter().ne(["instance_id", "complexity"]) {
        return Err(Error::parse(1, "complexity header must be `instance_id,complexity`"));
    }
    let mut values = Vec::new();
    for record in rdr.records() {
        let record = record.map_err(|e| Error::parse(e.position().map_or(0, |p| p.line() as usize), e.to_string()))?;
        let line = record.position().map_or(0, |p| p.line() as usize);
        let v: f64 = record[1]
            .parse()
            .map_err(|_| Error::parse(line, format!("complexity `{}` is not a number", &record[1])))?;
        values.push((record[0].to_string(), v));
    }
    ComplexityAssignment::per_instance(values)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Write;

    fn labels() -> LabelSet {
        LabelSet::new(["neg", "pos"]).unwrap()
    }

    #[test]
    fn inline_and_preset_priorities() {
        let p = parse_priorities_arg("neg=0.52,pos=0.48", &labels()).unwrap();
        assert_eq!(p.weights(), &[0.52, 0.48]);
        let p = parse_priorities_arg("favor-sensitivity", &labels()).unwrap();
        assert_eq!(p.weights(), &[0.25, 0.75]);
        assert!(parse_priorities_arg("neg=0.5,pos=0.6", &labels()).is_err());
        assert!(parse_priorities_arg("neg:0.5", &labels()).is_err());
    }

    #[test]
    fn files() {
        let dir = tempfile::tempdir().unwrap();
        let doc = dir.path().join("params.json");
        std::fs::File::create(&doc)
            .unwrap()
            .write_all(br#"{"tau": 0.75, "priorities": {"neg": 0.6, "pos": 0.4}, "complexity": {"a": 1, "b": 0.5}}"#)
            .unwrap();
        let at = format!("@{}", doc.display());
        assert_eq!(parse_tau_arg(&at).unwrap(), 0.75);
        assert_eq!(parse_priorities_arg(&at, &labels()).unwrap().weights(), &[0.6, 0.4]);
        let c = parse_complexity_arg(&at).unwrap();
        assert_eq!(c, ComplexityAssignment::per_instance([("a", 1.0), ("b", 0.5)]).unwrap());

        let csv = dir.path().join("c.csv");
        std::fs::write(&csv, "instance_id,complexity\na,1\nb,0.5\n").unwrap();
        assert_eq!(parse_complexity_arg(&format!("@{}", csv.display())).unwrap(), c);
    }

    #[test]
    fn complexity_errors() {
        assert_eq!(parse_complexity_arg("const:0.5").unwrap(), ComplexityAssignment::Constant(0.5));
        assert!(parse_complexity_arg("const:0").is_err());
        assert!(parse_complexity_arg("0.5").is_err());
        assert!(matches!(parse_complexity_arg("@/definitely/not/here"), Err(Error::Io { .. })));
        assert!(read_complexity_csv("instance_id,complexity\na,1.5\n").is_err());
        assert!(read_complexity_csv("instance_id,complexity\na,1\na,1\n").is_err());
    }
}
