//! Deriving H-accuracy parameters from rater annotations.
//!
//! Three parameters come out of a reader study: the confidence threshold
//! `tau` (from the confidence reported on correct answers), the class
//! priorities (from the raters' mean TPR and TNR, or from a stated
//! preference), and per-case complexity (from the mean reported difficulty).

use std::collections::{BTreeMap, BTreeSet};

use crate::error::{Error, Result};
use crate::metrics::risk_priorities;
use crate::params::{BinaryPriorities, ComplexityAssignment};

/// Default fractions of cases expected above the complexity thresholds
/// `d_T1`, `d_T2` and `d_T3`.
pub const DEFAULT_QUANTILES: [f64; 3] = [0.5, 0.33, 0.2];

/// Threshold on mean ordinal complexity separating ordinary from hard cases.
pub const DEFAULT_COMPLEXITY_THRESHOLD: f64 = 2.75;

// slack on "at least r of the correct answers"
const FRACTION_SLACK: f64 = 1e-9;

/// One rater's reading of one case.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RaterAnnotation {
    pub rater_id: String,
    pub instance_id: String,
    /// Decision name to assigned label, e.g. `acl -> yes`, `meniscus -> no`.
    pub assigned_labels: BTreeMap<String, String>,
    pub confidence: u32,
    pub complexity: u32,
}

/// Reference labels. A label may hold for every decision on a case or for a
/// single named decision; the decision-specific label wins.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Gold {
    any_decision: BTreeMap<String, String>,
    per_decision: BTreeMap<(String, String), String>,
}

impl Gold {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, instance: impl Into<String>, label: impl Into<String>) {
        self.any_decision.insert(instance.into(), label.into());
    }

    pub fn insert_for_decision(
        &mut self,
        instance: impl Into<String>,
        decision: impl Into<String>,
        label: impl Into<String>,
    ) {
        self.per_decision.insert((instance.into(), decision.into()), label.into());
    }

    pub fn label(&self, instance: &str, decision: &str) -> Option<&str> {
        self.per_decision
            .get(&(instance.to_string(), decision.to_string()))
            .or_else(|| self.any_decision.get(instance))
            .map(String::as_str)
    }

    pub fn contains(&self, instance: &str) -> bool {
        self.any_decision.contains_key(instance) || self.per_decision.keys().any(|(i, _)| i == instance)
    }

    /// Distinct gold labels, sorted; restricted to one decision when given.
    pub fn labels(&self, decision: Option<&str>) -> BTreeSet<&str> {
        let specific = self
            .per_decision
            .iter()
            .filter(|((_, d), _)| decision.is_none_or(|want| d == want))
            .map(|(_, l)| l.as_str());
        self.any_decision.values().map(String::as_str).chain(specific).collect()
    }

    /// Every instance id with a gold label, sorted.
    pub fn instances(&self) -> BTreeSet<&str> {
        self.any_decision.keys().map(String::as_str).chain(self.per_decision.keys().map(|(i, _)| i.as_str())).collect()
    }
}

/// A validated collection of annotations with its ordinal scales and gold
/// labels.
#[derive(Debug, Clone, PartialEq)]
pub struct AnnotationSet {
    annotations: Vec<RaterAnnotation>,
    confidence_scale_max: u32,
    complexity_scale_max: u32,
    gold: Gold,
}

impl AnnotationSet {
    /// Validation errors report the 1-based position of the offending record.
    pub fn new(
        annotations: Vec<RaterAnnotation>,
        confidence_scale_max: u32,
        complexity_scale_max: u32,
        gold: Gold,
    ) -> Result<Self> {
        if confidence_scale_max < 1 || complexity_scale_max < 1 {
            return Err(Error::InvalidParameter("ordinal scale maxima must be at least 1".into()));
        }
        let mut seen = BTreeSet::new();
        for (i, a) in annotations.iter().enumerate() {
            let line = i + 1;
            for (field, value, max) in
                [("confidence", a.confidence, confidence_scale_max), ("complexity", a.complexity, complexity_scale_max)]
            {
                if value < 1 || value > max {
                    return Err(Error::OutOfScaleOrdinal { line, field, value: value as i64, max });
                }
            }
            if !seen.insert((a.rater_id.as_str(), a.instance_id.as_str())) {
                return Err(Error::DuplicateAnnotation {
                    line,
                    rater: a.rater_id.clone(),
                    instance: a.instance_id.clone(),
                    decision: a.assigned_labels.keys().next().cloned().unwrap_or_default(),
                });
            }
            if a.assigned_labels.is_empty() {
                return Err(Error::InvalidParameter(format!("record {line}: no decisions")));
            }
            for decision in a.assigned_labels.keys() {
                if gold.label(&a.instance_id, decision).is_none() {
                    return Err(Error::UnknownInstance { line, id: a.instance_id.clone() });
                }
            }
        }
        Ok(AnnotationSet { annotations, confidence_scale_max, complexity_scale_max, gold })
    }

    pub fn annotations(&self) -> &[RaterAnnotation] {
        &self.annotations
    }

    pub fn confidence_scale_max(&self) -> u32 {
        self.confidence_scale_max
    }

    pub fn complexity_scale_max(&self) -> u32 {
        self.complexity_scale_max
    }

    pub fn gold(&self) -> &Gold {
        &self.gold
    }

    /// All decision names used, sorted.
    pub fn decisions(&self) -> BTreeSet<&str> {
        self.annotations.iter().flat_map(|a| a.assigned_labels.keys().map(String::as_str)).collect()
    }

    /// `(annotation, decision, assigned, gold)` for the selected decision;
    /// with no selector every decision is included.
    fn judgements<'a>(
        &'a self,
        decision: Option<&'a str>,
    ) -> Result<impl Iterator<Item = (&'a RaterAnnotation, &'a str, &'a str)> + 'a> {
        if let Some(d) = decision {
            if !self.decisions().contains(d) {
                return Err(Error::InvalidParameter(format!("unknown decision `{d}`")));
            }
        }
        Ok(self.annotations.iter().flat_map(move |a| {
            a.assigned_labels.iter().filter(move |(d, _)| decision.is_none_or(|sel| sel == d.as_str())).map(
                move |(d, label)| {
                    let gold = self.gold.label(&a.instance_id, d).expect("validated at construction");
                    (a, label.as_str(), gold)
                },
            )
        }))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RaterPerformance {
    pub rater_id: String,
    pub tpr: f64,
    pub tnr: f64,
}

impl RaterPerformance {
    pub fn new(rater_id: impl Into<String>, tpr: f64, tnr: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&tpr) || !(0.0..=1.0).contains(&tnr) {
            return Err(Error::InvalidParameter(format!("rates must lie in [0, 1], got tpr={tpr} tnr={tnr}")));
        }
        Ok(RaterPerformance { rater_id: rater_id.into(), tpr, tnr })
    }
}

/// Per-rater TPR and TNR against gold, sorted by rater id.
///
/// `positive` names the positive label; every other gold label counts as
/// negative.
pub fn rater_performances(
    annotations: &AnnotationSet,
    decision: Option<&str>,
    positive: &str,
) -> Result<Vec<RaterPerformance>> {
    // rater -> [tp, positives, tn, negatives]
    let mut tallies: BTreeMap<&str, [u64; 4]> = BTreeMap::new();
    for (a, assigned, gold) in annotations.judgements(decision)? {
        let t = tallies.entry(a.rater_id.as_str()).or_default();
        if gold == positive {
            t[1] += 1;
            if assigned == positive {
                t[0] += 1;
            }
        } else {
            t[3] += 1;
            if assigned != positive {
                t[2] += 1;
            }
        }
    }
    tallies
        .into_iter()
        .map(|(rater, [tp, p, tn, n])| {
            if p == 0 || n == 0 {
                return Err(Error::InvalidParameter(format!(
                    "rater `{rater}` did not read both positive and negative cases"
                )));
            }
            RaterPerformance::new(rater, tp as f64 / p as f64, tn as f64 / n as f64)
        })
        .collect()
}

/// Priorities proportional to the raters' mean TNR (negative class) and
/// mean TPR (positive class).
pub fn derive_priorities_from_raters(performances: &[RaterPerformance]) -> Result<BinaryPriorities> {
    if performances.is_empty() {
        return Err(Error::InvalidParameter("no rater performances".into()));
    }
    let n = performances.len() as f64;
    let mean_tpr = performances.iter().map(|r| r.tpr).sum::<f64>() / n;
    let mean_tnr = performances.iter().map(|r| r.tnr).sum::<f64>() / n;
    let total = mean_tpr + mean_tnr;
    if total <= 0.0 {
        return Err(Error::DegenerateRaters);
    }
    Ok(BinaryPriorities { negative: mean_tnr / total, positive: mean_tpr / total })
}

/// A stated preference between sensitivity and specificity.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PriorityPreset {
    FavorSpecificity,
    FavorSensitivity,
    Balanced,
}

impl std::str::FromStr for PriorityPreset {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "favor-specificity" => Ok(PriorityPreset::FavorSpecificity),
            "favor-sensitivity" => Ok(PriorityPreset::FavorSensitivity),
            "balanced" => Ok(PriorityPreset::Balanced),
            other => Err(Error::InvalidParameter(format!("unknown priority preset `{other}`"))),
        }
    }
}

pub fn priorities_from_preset(preset: PriorityPreset) -> BinaryPriorities {
    match preset {
        PriorityPreset::FavorSpecificity => BinaryPriorities { negative: 0.75, positive: 0.25 },
        PriorityPreset::FavorSensitivity => BinaryPriorities { negative: 0.25, positive: 0.75 },
        PriorityPreset::Balanced => BinaryPriorities { negative: 0.5, positive: 0.5 },
    }
}

/// Priorities under which H-accuracy with the risk penalty tracks net
/// benefit at risk threshold `tau` and prevalence `prevalence`.
pub fn priorities_from_risk(tau: f64, prevalence: f64) -> Result<BinaryPriorities> {
    for (name, v) in [("tau", tau), ("prevalence", prevalence)] {
        if !(v > 0.0 && v < 1.0) {
            return Err(Error::InvalidParameter(format!("{name} must lie in (0, 1), got {v}")));
        }
    }
    let (negative, positive, _) = risk_priorities(tau, prevalence);
    Ok(BinaryPriorities { negative, positive })
}

/// Highest normalized confidence level `c` such that the correct answers
/// given with confidence at least `c` make up at least a fraction `r` of all
/// correct answers.
///
/// `distribution` holds `(normalized level, number of correct answers)`.
pub fn tau_from_confidence_distribution(distribution: &[(f64, u64)], r: f64) -> Result<f64> {
    if !(r > 0.0 && r <= 1.0) {
        return Err(Error::InvalidParameter(format!("r must lie in (0, 1], got {r}")));
    }
    let mut levels: Vec<(f64, u64)> = distribution.iter().copied().filter(|&(_, n)| n > 0).collect();
    let total: u64 = levels.iter().map(|&(_, n)| n).sum();
    if total == 0 {
        return Err(Error::NoCorrectAnnotations);
    }
    levels.sort_by(|a, b| b.0.total_cmp(&a.0));
    let needed = r * total as f64 - FRACTION_SLACK;
    let mut tail = 0u64;
    let mut i = 0;
    while i < levels.len() {
        let level = levels[i].0;
        while i < levels.len() && levels[i].0 == level {
            tail += levels[i].1;
            i += 1;
        }
        if tail as f64 >= needed {
            return Ok(level);
        }
    }
    unreachable!("the full tail always reaches r <= 1")
}

/// Normalized confidence distribution of correct answers (`level / max`).
pub fn correct_confidence_distribution(annotations: &AnnotationSet, decision: Option<&str>) -> Result<Vec<(f64, u64)>> {
    let decision = default_decision(annotations, decision);
    let mut counts: BTreeMap<u32, u64> = BTreeMap::new();
    for (a, assigned, gold) in annotations.judgements(decision)? {
        if assigned == gold {
            *counts.entry(a.confidence).or_default() += 1;
        }
    }
    let max = annotations.confidence_scale_max() as f64;
    Ok(counts.into_iter().rev().map(|(level, n)| (level as f64 / max, n)).collect())
}

fn default_decision<'a>(annotations: &'a AnnotationSet, decision: Option<&'a str>) -> Option<&'a str> {
    decision.or_else(|| {
        let all = annotations.decisions();
        if all.len() == 1 {
            all.into_iter().next()
        } else {
            None
        }
    })
}

/// Tau from the confidence reported on correct answers; see
/// [`tau_from_confidence_distribution`]. Without a decision selector a
/// single-decision set uses its decision and a multi-decision set pools all
/// decisions.
pub fn derive_tau_from_confidence(annotations: &AnnotationSet, r: f64, decision: Option<&str>) -> Result<f64> {
    let distribution = correct_confidence_distribution(annotations, decision)?;
    tau_from_confidence_distribution(&distribution, r)
}

/// Mean ordinal complexity per case, on the raw ordinal scale.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexityProfile {
    pub per_case_mean: BTreeMap<String, f64>,
}

impl ComplexityProfile {
    pub fn from_means<I, S>(means: I) -> Self
    where
        I: IntoIterator<Item = (S, f64)>,
        S: Into<String>,
    {
        ComplexityProfile { per_case_mean: means.into_iter().map(|(k, v)| (k.into(), v)).collect() }
    }

    pub fn len(&self) -> usize {
        self.per_case_mean.len()
    }

    pub fn is_empty(&self) -> bool {
        self.per_case_mean.is_empty()
    }
}

/// Per-case arithmetic mean of the reported complexities. Every gold case
/// must have at least one annotation.
pub fn aggregate_complexity(annotations: &AnnotationSet) -> Result<ComplexityProfile> {
    let mut sums: BTreeMap<&str, (u64, u64)> = BTreeMap::new();
    for a in annotations.annotations() {
        let e = sums.entry(a.instance_id.as_str()).or_default();
        e.0 += a.complexity as u64;
        e.1 += 1;
    }
    let mut per_case_mean = BTreeMap::new();
    for id in annotations.gold().instances() {
        let (sum, n) = sums.get(id).ok_or_else(|| Error::MissingComplexity(id.to_string()))?;
        per_case_mean.insert(id.to_string(), *sum as f64 / *n as f64);
    }
    Ok(ComplexityProfile { per_case_mean })
}

/// `1` for cases with mean complexity strictly above `high_threshold`, `1/2`
/// otherwise.
pub fn two_level_complexity(profile: &ComplexityProfile, high_threshold: f64) -> ComplexityAssignment {
    map_profile(profile, |m| if m > high_threshold { 1.0 } else { 0.5 })
}

/// `1` for cases with mean complexity strictly above `threshold`, `0`
/// otherwise. A class whose cases all fall below leaves H-accuracy undefined;
/// see [`ComplexityAssignment::zero_weight_classes`].
pub fn binarize_complexity(profile: &ComplexityProfile, threshold: f64) -> ComplexityAssignment {
    map_profile(profile, |m| if m > threshold { 1.0 } else { 0.0 })
}

fn map_profile(profile: &ComplexityProfile, f: impl Fn(f64) -> f64) -> ComplexityAssignment {
    ComplexityAssignment::PerInstance(profile.per_case_mean.iter().map(|(id, &m)| (id.clone(), f(m))).collect())
}

/// For each fraction `q`, the smallest observed mean complexity `t` such that
/// at most `q * n` cases lie strictly above `t`.
pub fn quantile_thresholds(profile: &ComplexityProfile, fractions: &[f64]) -> Result<Vec<f64>> {
    if profile.is_empty() {
        return Err(Error::InvalidParameter("empty complexity profile".into()));
    }
    let mut means: Vec<f64> = profile.per_case_mean.values().copied().collect();
    means.sort_by(f64::total_cmp);
    let n = means.len();
    fractions
        .iter()
        .map(|&q| {
            if !(q > 0.0 && q < 1.0) {
                return Err(Error::InvalidParameter(format!("fraction must lie in (0, 1), got {q}")));
            }
            let allowed = q * n as f64 + FRACTION_SLACK;
            // candidates in ascending order; the largest always qualifies
            let t = means
                .iter()
                .copied()
                .find(|&t| (n - means.partition_point(|&m| m <= t)) as f64 <= allowed)
                .expect("the maximum leaves no case above");
            Ok(t)
        })
        .collect()
}
