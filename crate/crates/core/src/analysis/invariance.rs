//! Numerical checks of confusion-matrix invariance properties.
//!
//! Binary matrices are written in the conventional layout
//!
//! ```text
//! | tp  fn |
//! | fp  tn |
//! ```
//!
//! so "row 0" is the positive-truth row and "column 0" the positive-prediction
//! column. Metrics are prioritized H-accuracy at tau = 1/2 with constant
//! complexity, which reduces to `p(0) tn/(tn+fp) + p(1) tp/(tp+fn)`.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::confusion::ConfusionMatrix;
use crate::error::{Error, Result};
use crate::params::BinaryPriorities;

/// Two metric values closer than this count as equal.
pub const INVARIANCE_TOLERANCE: f64 = 1e-12;

/// Prioritized H-accuracy of a binary confusion matrix.
pub fn ha_from_confusion(cm: &ConfusionMatrix, priorities: BinaryPriorities) -> f64 {
    let (tp, fn_, fp, tn) = cm.cells();
    priorities.negative * tn / (tn + fp) + priorities.positive * tp / (tp + fn_)
}

/// A metric computable from a binary confusion matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CmMetric {
    /// Prioritized H-accuracy with fixed priorities.
    PrioritizedHa(BinaryPriorities),
    /// Prioritized H-accuracy with priorities equal to the class prevalences
    /// of the matrix being evaluated.
    PrevalenceWeightedHa,
}

impl CmMetric {
    pub fn evaluate(&self, cm: &ConfusionMatrix) -> f64 {
        match *self {
            CmMetric::PrioritizedHa(p) => ha_from_confusion(cm, p),
            CmMetric::PrevalenceWeightedHa => {
                let (tp, fn_, fp, tn) = cm.cells();
                let n = cm.total();
                ha_from_confusion(cm, BinaryPriorities { negative: (fp + tn) / n, positive: (tp + fn_) / n })
            }
        }
    }
}

impl fmt::Display for CmMetric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CmMetric::PrioritizedHa(p) => write!(f, "prioritized:{},{}", p.negative, p.positive),
            CmMetric::PrevalenceWeightedHa => write!(f, "prevalence"),
        }
    }
}

impl FromStr for CmMetric {
    type Err = Error;

    /// `prevalence` or `prioritized:<p_negative>,<p_positive>`.
    fn from_str(s: &str) -> Result<Self> {
        if s == "prevalence" {
            return Ok(CmMetric::PrevalenceWeightedHa);
        }
        let bad = || Error::InvalidParameter(format!("bad metric `{s}` (expected prevalence|prioritized:<p0>,<p1>)"));
        let rest = s.strip_prefix("prioritized:").ok_or_else(bad)?;
        let [negative, positive] = parse_pair(rest).ok_or_else(bad)?;
        if !(0.0..=1.0).contains(&negative)
            || !(0.0..=1.0).contains(&positive)
            || (negative + positive - 1.0).abs() > 1e-9
        {
            return Err(Error::InvalidPriorities(format!("{negative} + {positive} must be a priority pair")));
        }
        Ok(CmMetric::PrioritizedHa(BinaryPriorities { negative, positive }))
    }
}

fn parse_pair(s: &str) -> Option<[f64; 2]> {
    let (a, b) = s.split_once(',')?;
    Some([a.trim().parse().ok()?, b.trim().parse().ok()?])
}

/// Confusion-matrix transformations.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CmTransform {
    /// Exchange positive and negative classes: `(tp,fn,fp,tn) -> (tn,fp,fn,tp)`.
    ClassSwap,
    AddTn(f64),
    AddTp(f64),
    AddFn(f64),
    AddFp(f64),
    /// Multiply every cell by `k`.
    UniformScale(f64),
    /// Multiply column 0 by `k1` and column 1 by `k2`.
    ColumnScale(f64, f64),
    /// Multiply row 0 by `k1` and row 1 by `k2`.
    RowScale(f64, f64),
}

impl CmTransform {
    /// Conventional invariance-property name.
    pub fn property(&self) -> &'static str {
        match self {
            CmTransform::ClassSwap => "I1",
            CmTransform::AddTn(_) => "I2",
            CmTransform::AddTp(_) => "I3",
            CmTransform::AddFn(_) => "I4",
            CmTransform::AddFp(_) => "I5",
            CmTransform::UniformScale(_) => "I6",
            CmTransform::ColumnScale(..) => "I7",
            CmTransform::RowScale(..) => "I8",
        }
    }

    // smallest cell value a random matrix needs for the transform to stay valid
    fn cell_floor(&self) -> f64 {
        match *self {
            CmTransform::AddTn(d) | CmTransform::AddTp(d) | CmTransform::AddFn(d) | CmTransform::AddFp(d) => {
                1.0 + (-d).max(0.0)
            }
            _ => 1.0,
        }
    }
}

impl fmt::Display for CmTransform {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CmTransform::ClassSwap => write!(f, "class-swap"),
            CmTransform::AddTn(d) => write!(f, "add-tn:{d}"),
            CmTransform::AddTp(d) => write!(f, "add-tp:{d}"),
            CmTransform::AddFn(d) => write!(f, "add-fn:{d}"),
            CmTransform::AddFp(d) => write!(f, "add-fp:{d}"),
            CmTransform::UniformScale(k) => write!(f, "uniform-scale:{k}"),
            CmTransform::ColumnScale(a, b) => write!(f, "column-scale:{a},{b}"),
            CmTransform::RowScale(a, b) => write!(f, "row-scale:{a},{b}"),
        }
    }
}

impl FromStr for CmTransform {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidParameter(format!("bad transform `{s}`"));
        let (name, arg) = s.split_once(':').unwrap_or((s, ""));
        let one = || arg.trim().parse::<f64>().map_err(|_| bad());
        let two = || parse_pair(arg).ok_or_else(bad);
        Ok(match name {
            "class-swap" if arg.is_empty() => CmTransform::ClassSwap,
            "add-tn" => CmTransform::AddTn(one()?),
            "add-tp" => CmTransform::AddTp(one()?),
            "add-fn" => CmTransform::AddFn(one()?),
            "add-fp" => CmTransform::AddFp(one()?),
            "uniform-scale" => CmTransform::UniformScale(one()?),
            "column-scale" => {
                let [a, b] = two()?;
                CmTransform::ColumnScale(a, b)
            }
            "row-scale" => {
                let [a, b] = two()?;
                CmTransform::RowScale(a, b)
            }
            _ => return Err(bad()),
        })
    }
}

/// Applies `t` to a binary matrix.
pub fn apply_cm_transform(cm: &ConfusionMatrix, t: CmTransform) -> Result<ConfusionMatrix> {
    if !cm.is_binary() {
        return Err(Error::NotBinary(cm.k()));
    }
    let check_scale = |k: f64| {
        if k > 0.0 && k.is_finite() {
            Ok(k)
        } else {
            Err(Error::InvalidParameter(format!("scale factor must be positive, got {k}")))
        }
    };
    let (tp, fn_, fp, tn) = cm.cells();
    let (tp, fn_, fp, tn) = match t {
        CmTransform::ClassSwap => (tn, fp, fn_, tp),
        CmTransform::AddTn(d) => (tp, fn_, fp, tn + d),
        CmTransform::AddTp(d) => (tp + d, fn_, fp, tn),
        CmTransform::AddFn(d) => (tp, fn_ + d, fp, tn),
        CmTransform::AddFp(d) => (tp, fn_, fp + d, tn),
        CmTransform::UniformScale(k) => {
            let k = check_scale(k)?;
            (k * tp, k * fn_, k * fp, k * tn)
        }
        CmTransform::ColumnScale(k1, k2) => {
            let (k1, k2) = (check_scale(k1)?, check_scale(k2)?);
            (k1 * tp, k2 * fn_, k1 * fp, k2 * tn)
        }
        CmTransform::RowScale(k1, k2) => {
            let (k1, k2) = (check_scale(k1)?, check_scale(k2)?);
            (k1 * tp, k1 * fn_, k2 * fp, k2 * tn)
        }
    };
    ConfusionMatrix::binary(tp, fn_, fp, tn)
}

#[derive(Debug, Clone, PartialEq)]
pub struct Counterexample {
    pub original: ConfusionMatrix,
    pub transformed: ConfusionMatrix,
    pub before: f64,
    pub after: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Verdict {
    Invariant { trials: usize },
    Violated(Counterexample),
}

impl Verdict {
    pub fn is_invariant(&self) -> bool {
        matches!(self, Verdict::Invariant { .. })
    }
}

/// Evaluates `metric` on `trials` random matrices (every cell at least 1)
/// and their images under `t`; reports the first pair that differs by more
/// than [`INVARIANCE_TOLERANCE`].
pub fn check_invariance(metric: CmMetric, t: CmTransform, trials: usize, seed: u64) -> Result<Verdict> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let floor = t.cell_floor();
    for _ in 0..trials {
        let mut cell = || floor + rng.gen::<f64>() * 100.0;
        let original = ConfusionMatrix::binary(cell(), cell(), cell(), cell())?;
        let transformed = apply_cm_transform(&original, t)?;
        let before = metric.evaluate(&original);
        let after = metric.evaluate(&transformed);
        if (before - after).abs() > INVARIANCE_TOLERANCE {
            return Ok(Verdict::Violated(Counterexample { original, transformed, before, after }));
        }
    }
    Ok(Verdict::Invariant { trials })
}
