//! Accuracy-family metrics, the net-benefit family and the bridges between
//! them.
//!
//! All accumulation is sequential: instances in dataset order, classes in
//! label order, so repeated evaluations are bit-identical.

use crate::dataset::{argmax_index, Dataset};
use crate::error::{Error, Result};
use crate::params::{ComplexityAssignment, PenaltyKind, PenaltySpec, PriorityVector};
use crate::penalty::{check_open_unit, Penalty};

/// The full parameter set of H-accuracy.
#[derive(Debug, Clone, PartialEq)]
pub struct HaParams {
    pub tau: f64,
    pub priorities: PriorityVector,
    pub complexity: ComplexityAssignment,
    pub penalty: PenaltyKind,
}

impl HaParams {
    /// Chance-level tau, uniform priorities, constant complexity, standard
    /// penalty: the setting in which H-accuracy equals balanced accuracy.
    pub fn balanced(k: usize) -> Self {
        HaParams {
            tau: 1.0 / k as f64,
            priorities: PriorityVector::uniform(k),
            complexity: ComplexityAssignment::Constant(1.0),
            penalty: PenaltyKind::Standard,
        }
    }
}

/// H-accuracy: priority-weighted sum over classes of the complexity-weighted
/// mean penalty of that class's instances.
pub fn h_accuracy(dataset: &Dataset, params: &HaParams) -> Result<f64> {
    let labels = dataset.label_set();
    let penalty =
        Penalty::new(PenaltySpec { kind: params.penalty, tau: params.tau }, labels.len(), labels.positive_index())?;
    let weights = params.complexity.resolve(dataset)?;
    weighted_h_accuracy(dataset, penalty, params.priorities.weights(), &weights)
}

pub(crate) fn weighted_h_accuracy(
    dataset: &Dataset,
    penalty: Penalty,
    priorities: &[f64],
    weights: &[f64],
) -> Result<f64> {
    let labels = dataset.label_set();
    let k = labels.len();
    if priorities.len() != k {
        return Err(Error::InvalidPriorities(format!("{} weights for {k} labels", priorities.len())));
    }
    let counts = dataset.class_counts();
    let mut weight_sums = vec![0.0; k];
    for (i, w) in weights.iter().enumerate() {
        weight_sums[dataset.truth(i)] += w;
    }
    for c in 0..k {
        if counts[c] == 0 {
            return Err(Error::EmptyClass(labels.label(c).to_string()));
        }
        if weight_sums[c] <= 0.0 {
            return Err(Error::ZeroComplexityClass(labels.label(c).to_string()));
        }
    }
    let mut inner = vec![0.0; k];
    for ((truth, scores), w) in dataset.iter_scored().zip(weights) {
        inner[truth] += w / weight_sums[truth] * penalty.apply(scores, truth);
    }
    Ok(priorities.iter().zip(&inner).map(|(p, v)| p * v).sum())
}

/// Fraction of instances whose argmax label is the true label.
pub fn regular_accuracy(dataset: &Dataset) -> f64 {
    let hits = dataset.iter_scored().filter(|(t, s)| argmax_index(s) == *t).count();
    hits as f64 / dataset.len() as f64
}

/// Per-class argmax recall, in label order.
pub fn class_recalls(dataset: &Dataset) -> Result<Vec<f64>> {
    let labels = dataset.label_set();
    let counts = dataset.class_counts();
    let mut hits = vec![0usize; labels.len()];
    for (t, s) in dataset.iter_scored() {
        if argmax_index(s) == t {
            hits[t] += 1;
        }
    }
    (0..labels.len())
        .map(|c| {
            if counts[c] == 0 {
                Err(Error::EmptyClass(labels.label(c).to_string()))
            } else {
                Ok(hits[c] as f64 / counts[c] as f64)
            }
        })
        .collect()
}

/// Unweighted mean of per-class argmax recall.
pub fn balanced_accuracy(dataset: &Dataset) -> Result<f64> {
    let recalls = class_recalls(dataset)?;
    Ok(recalls.iter().sum::<f64>() / recalls.len() as f64)
}

/// Uniform priorities, constant complexity, standard penalty at `tau`.
pub fn confident_accuracy(dataset: &Dataset, tau: f64) -> Result<f64> {
    let k = dataset.label_set().len();
    h_accuracy(dataset, &HaParams { tau, ..HaParams::balanced(k) })
}

/// Chance-level tau, constant complexity, the given priorities.
pub fn prioritized_accuracy(dataset: &Dataset, priorities: &PriorityVector) -> Result<f64> {
    let k = dataset.label_set().len();
    h_accuracy(dataset, &HaParams { priorities: priorities.clone(), ..HaParams::balanced(k) })
}

/// Chance-level tau, uniform priorities, the given complexities.
pub fn practical_accuracy(dataset: &Dataset, complexity: &ComplexityAssignment) -> Result<f64> {
    let k = dataset.label_set().len();
    h_accuracy(dataset, &HaParams { complexity: complexity.clone(), ..HaParams::balanced(k) })
}

/// True/false positive rates of a binary classifier plus the positive
/// prevalence of the population they were measured on.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BinaryRates {
    pub tpr: f64,
    pub fpr: f64,
    pub prevalence: f64,
}

impl BinaryRates {
    pub fn new(tpr: f64, fpr: f64, prevalence: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&tpr) || !(0.0..=1.0).contains(&fpr) {
            return Err(Error::InvalidParameter(format!("rates must lie in [0, 1], got tpr={tpr} fpr={fpr}")));
        }
        if !(prevalence > 0.0 && prevalence < 1.0) {
            return Err(Error::InvalidParameter(format!("prevalence must lie in (0, 1), got {prevalence}")));
        }
        Ok(BinaryRates { tpr, fpr, prevalence })
    }

    /// Rates induced by the risk threshold: a positive is detected when its
    /// positive score is at least `tau`; a negative is rejected when its
    /// negative score exceeds `1 - tau`. Prevalence is empirical.
    pub fn at_risk_threshold(dataset: &Dataset, tau: f64) -> Result<Self> {
        let labels = dataset.label_set();
        labels.require_binary()?;
        check_open_unit(tau)?;
        let pos = labels.positive_index();
        let penalty = Penalty::Risk { tau, positive: pos };
        let counts = binary_class_counts(dataset)?;
        let mut hits = [0.0; 2];
        for (t, s) in dataset.iter_scored() {
            hits[t] += penalty.apply(s, t);
        }
        let neg = 1 - pos;
        let tpr = hits[pos] / counts[pos] as f64;
        let tnr = hits[neg] / counts[neg] as f64;
        BinaryRates::new(tpr, 1.0 - tnr, dataset.prevalence()?)
    }
}

/// `TPR * pi - (1 - pi) * tau / (1 - tau) * FPR`; may be negative.
pub fn net_benefit(rates: &BinaryRates, tau: f64) -> Result<f64> {
    check_open_unit(tau)?;
    let pi = rates.prevalence;
    Ok(rates.tpr * pi - (1.0 - pi) * (tau / (1.0 - tau)) * rates.fpr)
}

/// Net benefit divided by prevalence (relative utility).
pub fn standardized_net_benefit(rates: &BinaryRates, tau: f64) -> Result<f64> {
    Ok(net_benefit(rates, tau)? / rates.prevalence)
}

pub fn youden_index(rates: &BinaryRates) -> f64 {
    rates.tpr - rates.fpr
}

fn check_risk_tau(tau: f64) -> Result<()> {
    if tau == 1.0 {
        return Err(Error::DegenerateAtOne);
    }
    check_open_unit(tau)
}

/// Net-benefit-optimal priorities `(negative, positive)`, normalized
/// `<tau (1 - pi), (1 - tau) pi>`, and the normalizer.
pub(crate) fn risk_priorities(tau: f64, prevalence: f64) -> (f64, f64, f64) {
    let neg = tau * (1.0 - prevalence);
    let pos = (1.0 - tau) * prevalence;
    let alpha = neg + pos;
    (neg / alpha, pos / alpha, alpha)
}

fn risk_ha(dataset: &Dataset, tau: f64, negative: f64, positive: f64) -> Result<f64> {
    let labels = dataset.label_set();
    let mut p = vec![0.0; 2];
    p[labels.negative_index()] = negative;
    p[labels.positive_index()] = positive;
    let penalty = Penalty::Risk { tau, positive: labels.positive_index() };
    weighted_h_accuracy(dataset, penalty, &p, &vec![1.0; dataset.len()])
}

/// H-accuracy under the risk penalty with the net-benefit priorities at the
/// empirical prevalence.
pub fn risk_h_accuracy(dataset: &Dataset, tau: f64) -> Result<f64> {
    dataset.label_set().require_binary()?;
    check_risk_tau(tau)?;
    let (neg, pos, _) = risk_priorities(tau, dataset.prevalence()?);
    risk_ha(dataset, tau, neg, pos)
}

/// Net benefit computed through H-accuracy with the risk penalty, using the
/// empirical prevalence.
pub fn net_benefit_via_ha(dataset: &Dataset, tau: f64) -> Result<f64> {
    dataset.label_set().require_binary()?;
    net_benefit_via_ha_at(dataset, tau, dataset.prevalence()?)
}

/// As [`net_benefit_via_ha`] with a caller-supplied prevalence.
pub fn net_benefit_via_ha_at(dataset: &Dataset, tau: f64, prevalence: f64) -> Result<f64> {
    dataset.label_set().require_binary()?;
    check_risk_tau(tau)?;
    if !(prevalence > 0.0 && prevalence < 1.0) {
        return Err(Error::InvalidParameter(format!("prevalence must lie in (0, 1), got {prevalence}")));
    }
    let (neg, pos, alpha) = risk_priorities(tau, prevalence);
    let ha = risk_ha(dataset, tau, neg, pos)?;
    Ok(alpha / (1.0 - tau) * ha - tau * (1.0 - prevalence) / (1.0 - tau))
}

/// How [`standardized_nb_via_ha`] treats a prevalence other than one half.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PrevalenceCheck {
    /// Reject unless `|pi - 0.5| <= tolerance`.
    Strict { tolerance: f64 },
    /// Compute regardless; the identity with sNB then no longer holds.
    Lenient,
}

impl Default for PrevalenceCheck {
    fn default() -> Self {
        PrevalenceCheck::Strict { tolerance: 1e-9 }
    }
}

/// `(Ha(tau, <tau, 1 - tau>, const, risk) - tau) / (1 - tau)`, equal to the
/// standardized net benefit when the classes are balanced.
pub fn standardized_nb_via_ha(dataset: &Dataset, tau: f64, check: PrevalenceCheck) -> Result<f64> {
    dataset.label_set().require_binary()?;
    check_risk_tau(tau)?;
    if let PrevalenceCheck::Strict { tolerance } = check {
        let prevalence = dataset.prevalence()?;
        if (prevalence - 0.5).abs() > tolerance {
            return Err(Error::PrevalenceNotHalf { prevalence, tolerance });
        }
    }
    let ha = risk_ha(dataset, tau, tau, 1.0 - tau)?;
    Ok((ha - tau) / (1.0 - tau))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RocPoint {
    pub threshold: f64,
    pub fpr: f64,
    pub tpr: f64,
}

// class sizes of a binary dataset, both non-zero
fn binary_class_counts(dataset: &Dataset) -> Result<Vec<usize>> {
    let counts = dataset.class_counts();
    match counts.iter().position(|&n| n == 0) {
        Some(c) => Err(Error::EmptyClass(dataset.label_set().label(c).to_string())),
        None => Ok(counts),
    }
}

/// (positive score, is positive) per instance.
type ScoredInstances = Vec<(f64, bool)>;

fn positive_scores(dataset: &Dataset) -> Result<(ScoredInstances, usize, usize)> {
    let labels = dataset.label_set();
    labels.require_binary()?;
    let pos = labels.positive_index();
    let counts = binary_class_counts(dataset)?;
    let scored = dataset.iter_scored().map(|(t, s)| (s[pos], t == pos)).collect();
    Ok((scored, counts[pos], counts[1 - pos]))
}

/// ROC points for the rule "predict positive when the positive score is at
/// least the threshold", ordered by decreasing threshold.
pub fn roc_points(dataset: &Dataset, thresholds: &[f64]) -> Result<Vec<RocPoint>> {
    let (scored, n_pos, n_neg) = positive_scores(dataset)?;
    let mut thresholds = thresholds.to_vec();
    thresholds.sort_by(|a, b| b.total_cmp(a));
    Ok(thresholds
        .into_iter()
        .map(|threshold| {
            let (mut tp, mut fp) = (0usize, 0usize);
            for &(s, is_pos) in &scored {
                if s >= threshold {
                    if is_pos {
                        tp += 1;
                    } else {
                        fp += 1;
                    }
                }
            }
            RocPoint { threshold, fpr: fp as f64 / n_neg as f64, tpr: tp as f64 / n_pos as f64 }
        })
        .collect())
}

/// Trapezoidal area under the ROC staircase over all distinct score thresholds.
pub fn auroc(dataset: &Dataset) -> Result<f64> {
    let (mut scored, n_pos, n_neg) = positive_scores(dataset)?;
    scored.sort_by(|a, b| b.0.total_cmp(&a.0));
    let (mut tp, mut fp) = (0usize, 0usize);
    let (mut prev_fpr, mut prev_tpr) = (0.0, 0.0);
    let mut area = 0.0;
    let mut i = 0;
    while i < scored.len() {
        let threshold = scored[i].0;
        while i < scored.len() && scored[i].0 == threshold {
            if scored[i].1 {
                tp += 1;
            } else {
                fp += 1;
            }
            i += 1;
        }
        let fpr = fp as f64 / n_neg as f64;
        let tpr = tp as f64 / n_pos as f64;
        area += (fpr - prev_fpr) * (tpr + prev_tpr) / 2.0;
        prev_fpr = fpr;
        prev_tpr = tpr;
    }
    Ok(area)
}
