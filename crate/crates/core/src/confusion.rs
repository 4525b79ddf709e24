//! Real-valued confusion matrices.
//!
//! Entries are `f64` rather than counts so that multiplicative transforms
//! (`k * CM`, row and column scaling) stay representable.

use crate::error::{Error, Result};

/// `k x k` matrix; rows are true classes, columns predicted classes.
///
/// For the binary case the positive class is index 1 unless constructed
/// otherwise, and `tp`/`fn`/`fp`/`tn` name the cells relative to it.
#[derive(Debug, Clone, PartialEq)]
pub struct ConfusionMatrix {
    k: usize,
    counts: Vec<f64>,
    positive: usize,
}

impl ConfusionMatrix {
    pub fn from_row_major(k: usize, counts: Vec<f64>) -> Result<Self> {
        if k < 2 || counts.len() != k * k {
            return Err(Error::InvalidParameter(format!(
                "confusion matrix needs {k}x{k} entries, got {}",
                counts.len()
            )));
        }
        if counts.iter().any(|&c| !c.is_finite() || c < 0.0) {
            return Err(Error::NegativeCell);
        }
        if counts.iter().sum::<f64>() <= 0.0 {
            return Err(Error::InvalidParameter("confusion matrix total must be positive".into()));
        }
        Ok(ConfusionMatrix { k, counts, positive: 1 })
    }

    /// Binary matrix from named cells, negative class at index 0.
    pub fn binary(tp: f64, fn_: f64, fp: f64, tn: f64) -> Result<Self> {
        Self::from_row_major(2, vec![tn, fp, fn_, tp])
    }

    pub(crate) fn with_positive_index(mut self, positive: usize) -> Self {
        self.positive = positive;
        self
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn get(&self, true_class: usize, predicted: usize) -> f64 {
        self.counts[true_class * self.k + predicted]
    }

    pub fn total(&self) -> f64 {
        self.counts.iter().sum()
    }

    pub fn row_total(&self, true_class: usize) -> f64 {
        self.counts[true_class * self.k..(true_class + 1) * self.k].iter().sum()
    }

    fn neg(&self) -> usize {
        1 - self.positive
    }

    pub fn tp(&self) -> f64 {
        self.get(self.positive, self.positive)
    }

    pub fn fn_(&self) -> f64 {
        self.get(self.positive, self.neg())
    }

    pub fn fp(&self) -> f64 {
        self.get(self.neg(), self.positive)
    }

    pub fn tn(&self) -> f64 {
        self.get(self.neg(), self.neg())
    }

    /// `(tp, fn, fp, tn)` of a binary matrix.
    pub fn cells(&self) -> (f64, f64, f64, f64) {
        (self.tp(), self.fn_(), self.fp(), self.tn())
    }

    pub fn is_binary(&self) -> bool {
        self.k == 2
    }
}
