//! Class priorities, instance complexities and penalty settings.

use std::collections::BTreeMap;

use crate::dataset::{Dataset, LabelSet};
use crate::error::{Error, Result};

/// Tolerance on the priorities summing to one.
pub const PRIORITY_SUM_TOLERANCE: f64 = 1e-9;

/// Per-class importance weights in [`LabelSet`] order, summing to one.
#[derive(Debug, Clone, PartialEq)]
pub struct PriorityVector(Vec<f64>);

impl PriorityVector {
    pub fn new(weights: Vec<f64>) -> Result<Self> {
        if weights.len() < 2 {
            return Err(Error::InvalidPriorities(format!("need at least 2 weights, got {}", weights.len())));
        }
        if let Some(w) = weights.iter().find(|w| !(0.0..=1.0).contains(*w)) {
            return Err(Error::InvalidPriorities(format!("weight {w} outside [0, 1]")));
        }
        let sum: f64 = weights.iter().sum();
        if (sum - 1.0).abs() > PRIORITY_SUM_TOLERANCE {
            return Err(Error::InvalidPriorities(format!("weights sum to {sum}, expected 1")));
        }
        Ok(PriorityVector(weights))
    }

    pub fn uniform(k: usize) -> Self {
        PriorityVector(vec![1.0 / k as f64; k])
    }

    /// Binary priorities aligned to `labels` (which may designate either label
    /// positive).
    pub fn binary(negative: f64, positive: f64, labels: &LabelSet) -> Result<Self> {
        labels.require_binary()?;
        let mut w = vec![0.0; 2];
        w[labels.negative_index()] = negative;
        w[labels.positive_index()] = positive;
        Self::new(w)
    }

    /// Builds from `(label, weight)` pairs that must name every label exactly once.
    pub fn from_pairs<'a, I>(labels: &LabelSet, pairs: I) -> Result<Self>
    where
        I: IntoIterator<Item = (&'a str, f64)>,
    {
        let mut w: Vec<Option<f64>> = vec![None; labels.len()];
        for (label, weight) in pairs {
            let i =
                labels.index_of(label).ok_or_else(|| Error::InvalidPriorities(format!("unknown label `{label}`")))?;
            if w[i].replace(weight).is_some() {
                return Err(Error::InvalidPriorities(format!("label `{label}` given twice")));
            }
        }
        let weights = w
            .into_iter()
            .enumerate()
            .map(|(i, v)| v.ok_or_else(|| Error::InvalidPriorities(format!("no weight for `{}`", labels.label(i)))))
            .collect::<Result<Vec<_>>>()?;
        Self::new(weights)
    }

    pub fn weights(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// Priorities of a binary task, stated independently of label order.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BinaryPriorities {
    pub negative: f64,
    pub positive: f64,
}

impl BinaryPriorities {
    pub fn to_vector(self, labels: &LabelSet) -> Result<PriorityVector> {
        PriorityVector::binary(self.negative, self.positive, labels)
    }
}

/// Per-instance difficulty weights.
#[derive(Debug, Clone, PartialEq)]
pub enum ComplexityAssignment {
    /// Every instance carries the same weight (any positive value).
    Constant(f64),
    /// Weights in [0, 1] keyed by instance id.
    PerInstance(BTreeMap<String, f64>),
}

impl Default for ComplexityAssignment {
    fn default() -> Self {
        ComplexityAssignment::Constant(1.0)
    }
}

impl ComplexityAssignment {
    pub fn per_instance<I, S>(values: I) -> Result<Self>
    where
        I: IntoIterator<Item = (S, f64)>,
        S: Into<String>,
    {
        let mut map = BTreeMap::new();
        for (id, v) in values {
            let id = id.into();
            if !(0.0..=1.0).contains(&v) {
                return Err(Error::InvalidComplexity(format!("instance `{id}`: value {v} outside [0, 1]")));
            }
            if map.insert(id.clone(), v).is_some() {
                return Err(Error::InvalidComplexity(format!("instance `{id}` given twice")));
            }
        }
        Ok(ComplexityAssignment::PerInstance(map))
    }

    /// Resolves to one weight per instance, in dataset order.
    pub fn resolve(&self, dataset: &Dataset) -> Result<Vec<f64>> {
        match self {
            ComplexityAssignment::Constant(c) => {
                if !(c.is_finite() && *c > 0.0) {
                    return Err(Error::InvalidComplexity(format!("constant complexity must be > 0, got {c}")));
                }
                Ok(vec![*c; dataset.len()])
            }
            ComplexityAssignment::PerInstance(map) => {
                let weights = dataset
                    .instances()
                    .iter()
                    .map(|x| {
                        map.get(&x.id)
                            .copied()
                            .ok_or_else(|| Error::InvalidComplexity(format!("no complexity for instance `{}`", x.id)))
                    })
                    .collect::<Result<Vec<_>>>()?;
                if map.len() != dataset.len() {
                    let unknown = map
                        .keys()
                        .find(|id| !dataset.instances().iter().any(|x| &x.id == *id))
                        .expect("extra key exists");
                    return Err(Error::InvalidComplexity(format!("unknown instance `{unknown}`")));
                }
                if let Some(v) = weights.iter().find(|v| !(0.0..=1.0).contains(*v)) {
                    return Err(Error::InvalidComplexity(format!("value {v} outside [0, 1]")));
                }
                Ok(weights)
            }
        }
    }

    /// Labels of classes whose instances all carry zero weight.
    pub fn zero_weight_classes(&self, dataset: &Dataset) -> Result<Vec<String>> {
        let weights = self.resolve(dataset)?;
        let k = dataset.label_set().len();
        let mut sums = vec![0.0; k];
        for (i, w) in weights.iter().enumerate() {
            sums[dataset.truth(i)] += w;
        }
        let counts = dataset.class_counts();
        Ok((0..k)
            .filter(|&c| counts[c] > 0 && sums[c] == 0.0)
            .map(|c| dataset.label_set().label(c).to_string())
            .collect())
    }
}

/// Which penalty function discounts correct predictions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum PenaltyKind {
    /// Linear confidence penalty between chance level and tau.
    #[default]
    Standard,
    /// Binary risk-threshold indicator.
    Risk,
}

impl PenaltyKind {
    pub fn name(self) -> &'static str {
        match self {
            PenaltyKind::Standard => "standard",
            PenaltyKind::Risk => "risk",
        }
    }
}

impl std::str::FromStr for PenaltyKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "standard" => Ok(PenaltyKind::Standard),
            "risk" => Ok(PenaltyKind::Risk),
            other => Err(Error::InvalidParameter(format!("unknown penalty `{other}` (expected standard|risk)"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PenaltySpec {
    pub kind: PenaltyKind,
    pub tau: f64,
}

impl PenaltySpec {
    pub fn standard(tau: f64) -> Self {
        PenaltySpec { kind: PenaltyKind::Standard, tau }
    }

    pub fn risk(tau: f64) -> Self {
        PenaltySpec { kind: PenaltyKind::Risk, tau }
    }
}
