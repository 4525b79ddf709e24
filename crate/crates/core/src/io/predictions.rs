//! Predictions CSV: `instance_id,true_label,score:<label1>,...,score:<labelK>`.
//!
//! The label set is read from the score columns, in column order.

use std::fmt::Write as _;
use std::io::Read;
use std::path::Path;

use crate::dataset::{Dataset, Instance, LabelSet, NormalizationMode};
use crate::error::{Error, Result};

pub const SCORE_PREFIX: &str = "score:";

pub fn parse_predictions(path: &Path, mode: NormalizationMode) -> Result<Dataset> {
    let file = std::fs::File::open(path).map_err(|e| Error::io(path, e))?;
    read_predictions(file, mode)
}

fn csv_error(e: csv::Error) -> Error {
    let line = e.position().map_or(0, |p| p.line() as usize);
    Error::parse(line, e.to_string())
}

pub fn read_predictions<R: Read>(reader: R, mode: NormalizationMode) -> Result<Dataset> {
    let mut rdr = csv::ReaderBuilder::new().has_headers(true).from_reader(reader);
    let header = rdr.headers().map_err(csv_error)?.clone();
    let column = |i: usize| header.get(i).unwrap_or("");
    for (i, expected) in ["instance_id", "true_label"].into_iter().enumerate() {
        if column(i) != expected {
            return Err(Error::parse(1, format!("column {} must be `{expected}`, found `{}`", i + 1, column(i))));
        }
    }
    let mut labels = Vec::new();
    for name in header.iter().skip(2) {
        match name.strip_prefix(SCORE_PREFIX) {
            Some(label) if !label.is_empty() => labels.push(label.to_string()),
            _ => return Err(Error::parse(1, format!("column `{name}` is not of the form `score:<label>`"))),
        }
    }
    let labels = LabelSet::new(labels).map_err(|e| Error::parse(1, e.to_string()))?;

    let mut instances = Vec::new();
    for record in rdr.records() {
        let record = record.map_err(csv_error)?;
        let line = record.position().map_or(0, |p| p.line() as usize);
        let id = &record[0];
        let truth = &record[1];
        if labels.index_of(truth).is_none() {
            return Err(Error::parse(
                line,
                format!("missing score column `{SCORE_PREFIX}{truth}` for true label `{truth}`"),
            ));
        }
        let scores = record
            .iter()
            .skip(2)
            .zip(labels.labels())
            .map(|(field, label)| {
                field
                    .parse::<f64>()
                    .map_err(|_| Error::parse(line, format!("`{SCORE_PREFIX}{label}`: `{field}` is not a number")))
            })
            .collect::<Result<Vec<_>>>()?;
        instances.push(Instance::new(id, truth, scores));
    }
    Dataset::new(labels, instances, mode)
}

/// Serializes a dataset in the predictions format; scores use the shortest
/// representation that reads back to the same value.
pub fn write_predictions(dataset: &Dataset) -> String {
    let mut out = String::from("instance_id,true_label");
    for label in dataset.label_set().labels() {
        let _ = write!(out, ",{SCORE_PREFIX}{label}");
    }
    out.push('\n');
    for x in dataset.instances() {
        let _ = write!(out, "{},{}", x.id, x.true_label);
        for s in x.scores.as_slice() {
            let _ = write!(out, ",{s}");
        }
        out.push('\n');
    }
    out
}
