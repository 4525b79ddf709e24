//! Labels, score vectors and datasets, plus the argmax decision rule.

use std::collections::HashSet;

use crate::confusion::ConfusionMatrix;
use crate::error::{Error, Result, Violation};

/// Tolerance on the score-sum constraint in [`NormalizationMode::Soft`].
pub const SCORE_SUM_TOLERANCE: f64 = 1e-9;

/// How strictly score vectors are checked.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum NormalizationMode {
    /// Scores must lie in [0, 1] and sum to 1.
    #[default]
    Soft,
    /// Scores must lie in [0, 1]; no sum constraint.
    Raw,
}

/// Ordered set of class identifiers. The order fixes score-vector columns.
///
/// For binary sets one label is designated positive; by default the second.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LabelSet {
    labels: Vec<String>,
    positive: usize,
}

impl LabelSet {
    pub fn new<I, S>(labels: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let labels: Vec<String> = labels.into_iter().map(Into::into).collect();
        if labels.len() < 2 {
            return Err(Error::InvalidLabelSet(format!("need at least 2 labels, found {}", labels.len())));
        }
        let mut seen = HashSet::new();
        for label in &labels {
            if label.is_empty() {
                return Err(Error::InvalidLabelSet("empty label identifier".into()));
            }
            if !seen.insert(label.as_str()) {
                return Err(Error::InvalidLabelSet(format!("duplicate label `{label}`")));
            }
        }
        Ok(LabelSet { labels, positive: 1 })
    }

    /// Designates `label` as the positive class of a binary set.
    pub fn with_positive(mut self, label: &str) -> Result<Self> {
        if self.len() != 2 {
            return Err(Error::NotBinary(self.len()));
        }
        self.positive =
            self.index_of(label).ok_or_else(|| Error::InvalidLabelSet(format!("unknown positive label `{label}`")))?;
        Ok(self)
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, index: usize) -> &str {
        &self.labels[index]
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    pub fn is_binary(&self) -> bool {
        self.labels.len() == 2
    }

    /// Chance level `1/k`.
    pub fn chance(&self) -> f64 {
        1.0 / self.labels.len() as f64
    }

    pub fn positive_index(&self) -> usize {
        self.positive
    }

    pub fn negative_index(&self) -> usize {
        1 - self.positive
    }

    pub(crate) fn require_binary(&self) -> Result<()> {
        if self.is_binary() {
            Ok(())
        } else {
            Err(Error::NotBinary(self.len()))
        }
    }
}

/// Per-class confidence scores of one instance, in [`LabelSet`] order.
#[derive(Debug, Clone, PartialEq)]
pub struct ScoreVector(Vec<f64>);

impl ScoreVector {
    pub fn new(scores: Vec<f64>) -> Self {
        ScoreVector(scores)
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn max(&self) -> f64 {
        self.0.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }
}

impl From<Vec<f64>> for ScoreVector {
    fn from(scores: Vec<f64>) -> Self {
        ScoreVector(scores)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Instance {
    pub id: String,
    pub true_label: String,
    pub scores: ScoreVector,
}

impl Instance {
    pub fn new(id: impl Into<String>, true_label: impl Into<String>, scores: Vec<f64>) -> Self {
        Instance { id: id.into(), true_label: true_label.into(), scores: ScoreVector(scores) }
    }
}

/// A validated, immutable evaluation dataset.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    label_set: LabelSet,
    instances: Vec<Instance>,
    // true-label index of each instance, parallel to `instances`
    truth: Vec<usize>,
}

impl Dataset {
    pub fn new(label_set: LabelSet, instances: Vec<Instance>, mode: NormalizationMode) -> Result<Self> {
        validate_dataset(label_set, instances, mode)
    }

    pub fn label_set(&self) -> &LabelSet {
        &self.label_set
    }

    pub fn instances(&self) -> &[Instance] {
        &self.instances
    }

    pub fn len(&self) -> usize {
        self.instances.len()
    }

    pub fn is_empty(&self) -> bool {
        self.instances.is_empty()
    }

    /// True-label index of instance `i`.
    pub fn truth(&self, i: usize) -> usize {
        self.truth[i]
    }

    /// Iterates `(true-label index, scores)` in dataset order.
    pub fn iter_scored(&self) -> impl Iterator<Item = (usize, &[f64])> + '_ {
        self.truth.iter().zip(&self.instances).map(|(&t, x)| (t, x.scores.as_slice()))
    }

    /// Number of instances per class, in label order.
    pub fn class_counts(&self) -> Vec<usize> {
        let mut counts = vec![0; self.label_set.len()];
        for &t in &self.truth {
            counts[t] += 1;
        }
        counts
    }

    /// Empirical prevalence of the positive class of a binary dataset.
    pub fn prevalence(&self) -> Result<f64> {
        self.label_set.require_binary()?;
        let pos = self.label_set.positive_index();
        Ok(self.class_counts()[pos] as f64 / self.len() as f64)
    }

    /// Re-checks this dataset under a (possibly stricter) mode.
    pub fn revalidate(&self, mode: NormalizationMode) -> Result<()> {
        let violations = collect_violations(&self.label_set, &self.instances, mode);
        if violations.is_empty() {
            Ok(())
        } else {
            Err(Error::InvalidDataset(violations))
        }
    }

    /// Returns a copy with a different positive-class designation.
    pub fn with_positive(&self, label: &str) -> Result<Self> {
        Ok(Dataset {
            label_set: self.label_set.clone().with_positive(label)?,
            instances: self.instances.clone(),
            truth: self.truth.clone(),
        })
    }
}

fn collect_violations(label_set: &LabelSet, instances: &[Instance], mode: NormalizationMode) -> Vec<Violation> {
    let mut violations = Vec::new();
    if instances.is_empty() {
        violations.push(Violation::EmptyDataset);
    }
    let k = label_set.len();
    let mut seen = HashSet::new();
    for x in instances {
        if !seen.insert(x.id.as_str()) {
            violations.push(Violation::DuplicateId { id: x.id.clone() });
        }
        if label_set.index_of(&x.true_label).is_none() {
            violations.push(Violation::UnknownLabel { id: x.id.clone(), label: x.true_label.clone() });
        }
        let scores = x.scores.as_slice();
        if scores.len() != k {
            violations.push(Violation::WrongScoreCount { id: x.id.clone(), expected: k, found: scores.len() });
            continue;
        }
        let mut in_range = true;
        for (j, &s) in scores.iter().enumerate() {
            // also rejects NaN
            if !(0.0..=1.0).contains(&s) {
                in_range = false;
                violations.push(Violation::ScoreOutOfRange {
                    id: x.id.clone(),
                    label: label_set.label(j).to_string(),
                    value: s,
                });
            }
        }
        if in_range && mode == NormalizationMode::Soft {
            let sum: f64 = scores.iter().sum();
            if (sum - 1.0).abs() > SCORE_SUM_TOLERANCE {
                violations.push(Violation::ScoresNotNormalized { id: x.id.clone(), sum });
            }
        }
    }
    violations
}

/// Builds a [`Dataset`] iff every invariant holds under `mode`; otherwise
/// reports all violations at once.
pub fn validate_dataset(label_set: LabelSet, instances: Vec<Instance>, mode: NormalizationMode) -> Result<Dataset> {
    let violations = collect_violations(&label_set, &instances, mode);
    if !violations.is_empty() {
        return Err(Error::InvalidDataset(violations));
    }
    let truth = instances.iter().map(|x| label_set.index_of(&x.true_label).expect("checked above")).collect();
    Ok(Dataset { label_set, instances, truth })
}

/// Index of the maximal score; ties go to the earliest label.
pub fn argmax_index(scores: &[f64]) -> usize {
    let mut best = 0;
    for (j, &s) in scores.iter().enumerate().skip(1) {
        if s > scores[best] {
            best = j;
        }
    }
    best
}

/// The label the model commits to: maximal score, first label on ties.
pub fn argmax_label<'a>(scores: &ScoreVector, label_set: &'a LabelSet) -> &'a str {
    label_set.label(argmax_index(scores.as_slice()))
}

/// Rows are true classes, columns argmax predictions, both in label order.
pub fn confusion_matrix(dataset: &Dataset) -> ConfusionMatrix {
    let k = dataset.label_set().len();
    let mut counts = vec![0.0; k * k];
    for (t, scores) in dataset.iter_scored() {
        counts[t * k + argmax_index(scores)] += 1.0;
    }
    let cm = ConfusionMatrix::from_row_major(k, counts).expect("counts are non-negative with positive total");
    if k == 2 {
        cm.with_positive_index(dataset.label_set().positive_index())
    } else {
        cm
    }
}
