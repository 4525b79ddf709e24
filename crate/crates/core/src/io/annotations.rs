//! Rater annotation and gold-label CSV files.
//!
//! Annotations start with a scale declaration, then one row per decision:
//!
//! ```text
//! #scales confidence=4 complexity=5
//! rater_id,instance_id,decision,assigned_label,confidence,complexity
//! r01,case001,acl,yes,3,2
//! r01,case001,meniscus,no,3,2
//! ```
//!
//! Rows sharing `(rater_id, instance_id)` form one annotation and must agree
//! on confidence and complexity.

use std::collections::BTreeMap;
use std::io::Read;
use std::path::Path;

use crate::dataset::Dataset;
use crate::elicitation::{AnnotationSet, Gold, RaterAnnotation};
use crate::error::{Error, Result};

const ANNOTATION_HEADER: [&str; 6] =
    ["rater_id", "instance_id", "decision", "assigned_label", "confidence", "complexity"];

fn read_file(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::io(path, e))
}

fn record_line(record: &csv::StringRecord, offset: usize) -> usize {
    record.position().map_or(0, |p| p.line() as usize) + offset
}

fn csv_error(e: csv::Error, offset: usize) -> Error {
    let line = e.position().map_or(0, |p| p.line() as usize) + offset;
    Error::parse(line, e.to_string())
}

/// Gold labels: `instance_id,label` (all decisions) or
/// `instance_id,decision,label`.
pub fn parse_gold(path: &Path) -> Result<Gold> {
    read_gold(read_file(path)?.as_bytes())
}

pub fn read_gold<R: Read>(reader: R) -> Result<Gold> {
    let mut rdr = csv::ReaderBuilder::new().from_reader(reader);
    let header: Vec<String> = rdr.headers().map_err(|e| csv_error(e, 0))?.iter().map(str::to_string).collect();
    let per_decision = match header.iter().map(String::as_str).collect::<Vec<_>>().as_slice() {
        ["instance_id", "label"] => false,
        ["instance_id", "decision", "label"] => true,
        _ => {
            return Err(Error::parse(
                1,
                format!(
                    "gold header must be `instance_id,label` or `instance_id,decision,label`, found `{}`",
                    header.join(",")
                ),
            ))
        }
    };
    let mut gold = Gold::new();
    for record in rdr.records() {
        let record = record.map_err(|e| csv_error(e, 0))?;
        if per_decision {
            gold.insert_for_decision(&record[0], &record[1], &record[2]);
        } else {
            gold.insert(&record[0], &record[1]);
        }
    }
    Ok(gold)
}

/// Gold labels taken from the true labels of a predictions dataset.
pub fn gold_from_dataset(dataset: &Dataset) -> Gold {
    let mut gold = Gold::new();
    for x in dataset.instances() {
        gold.insert(&x.id, &x.true_label);
    }
    gold
}

pub fn parse_annotations(path: &Path, gold: Gold) -> Result<AnnotationSet> {
    read_annotations(&read_file(path)?, gold)
}

fn parse_scales(line: &str) -> Result<(u32, u32)> {
    let bad = |m: &str| Error::parse(1, format!("{m}; expected `#scales confidence=<max> complexity=<max>`"));
    let rest = line.trim().strip_prefix("#scales").ok_or_else(|| bad("missing scale declaration"))?;
    let mut confidence = None;
    let mut complexity = None;
    for part in rest.split_whitespace() {
        let (key, value) = part.split_once('=').ok_or_else(|| bad("malformed scale entry"))?;
        let value: u32 = value.parse().map_err(|_| bad("scale maximum is not a positive integer"))?;
        if value == 0 {
            return Err(bad("scale maximum must be at least 1"));
        }
        match key {
            "confidence" => confidence = Some(value),
            "complexity" => complexity = Some(value),
            _ => return Err(bad("unknown scale")),
        }
    }
    match (confidence, complexity) {
        (Some(a), Some(b)) => Ok((a, b)),
        _ => Err(bad("both scales must be declared")),
    }
}

fn parse_ordinal(field: &str, name: &'static str, line: usize, max: u32) -> Result<u32> {
    let value: i64 =
        field.trim().parse().map_err(|_| Error::parse(line, format!("{name} `{field}` is not an integer")))?;
    if value < 1 || value > max as i64 {
        return Err(Error::OutOfScaleOrdinal { line, field: name, value, max });
    }
    Ok(value as u32)
}

pub fn read_annotations(text: &str, gold: Gold) -> Result<AnnotationSet> {
    let (first, rest) = text.split_once('\n').unwrap_or((text, ""));
    let (confidence_max, complexity_max) = parse_scales(first)?;
    // csv positions are relative to `rest`, which starts on line 2
    let offset = 1;
    let mut rdr = csv::ReaderBuilder::new().from_reader(rest.as_bytes());
    let header = rdr.headers().map_err(|e| csv_error(e, offset))?.clone();
    if header.iter().ne(ANNOTATION_HEADER) {
        return Err(Error::parse(
            2,
            format!(
                "annotation header must be `{}`, found `{}`",
                ANNOTATION_HEADER.join(","),
                header.iter().collect::<Vec<_>>().join(",")
            ),
        ));
    }

    let mut grouped: BTreeMap<(String, String), (usize, RaterAnnotation)> = BTreeMap::new();
    for record in rdr.records() {
        let record = record.map_err(|e| csv_error(e, offset))?;
        let line = record_line(&record, offset);
        let (rater, instance, decision, label) = (&record[0], &record[1], &record[2], &record[3]);
        let confidence = parse_ordinal(&record[4], "confidence", line, confidence_max)?;
        let complexity = parse_ordinal(&record[5], "complexity", line, complexity_max)?;
        if gold.label(instance, decision).is_none() {
            return Err(Error::UnknownInstance { line, id: instance.to_string() });
        }
        let key = (rater.to_string(), instance.to_string());
        let (_, entry) = grouped.entry(key).or_insert_with(|| {
            (
                line,
                RaterAnnotation {
                    rater_id: rater.to_string(),
                    instance_id: instance.to_string(),
                    assigned_labels: BTreeMap::new(),
                    confidence,
                    complexity,
                },
            )
        });
        if entry.confidence != confidence || entry.complexity != complexity {
            return Err(Error::parse(
                line,
                format!(
                    "rater `{rater}` gives instance `{instance}` different confidence or complexity across decisions"
                ),
            ));
        }
        if entry.assigned_labels.insert(decision.to_string(), label.to_string()).is_some() {
            return Err(Error::DuplicateAnnotation {
                line,
                rater: rater.to_string(),
                instance: instance.to_string(),
                decision: decision.to_string(),
            });
        }
    }
    // keep file order
    let mut annotations: Vec<(usize, RaterAnnotation)> = grouped.into_values().collect();
    annotations.sort_by_key(|(line, _)| *line);
    AnnotationSet::new(annotations.into_iter().map(|(_, a)| a).collect(), confidence_max, complexity_max, gold)
}
