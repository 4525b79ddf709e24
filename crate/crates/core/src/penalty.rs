//! Penalty functions that discount correct but unconfident predictions.
//!
//! The standard penalty is zero when the true class is not the model's top
//! score, interpolates linearly from chance level `1/k` up to `tau`, and is
//! one above `tau`. At `tau = 1/k` it collapses to the argmax indicator.
//!
//! The risk penalty is a binary indicator: a positive counts when its
//! positive score reaches `tau`, a negative when its negative score exceeds
//! `1 - tau`.

use crate::error::{Error, Result};
use crate::params::{PenaltyKind, PenaltySpec};

/// Slack allowed when deciding that `tau` sits exactly at chance level.
pub const CHANCE_TOLERANCE: f64 = 1e-12;

/// A penalty specification validated against a label-set size.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) enum Penalty {
    /// `tau == 1/k`: the argmax indicator.
    Indicator,
    Linear {
        tau: f64,
        chance: f64,
    },
    Risk {
        tau: f64,
        positive: usize,
    },
}

impl Penalty {
    pub(crate) fn new(spec: PenaltySpec, k: usize, positive: usize) -> Result<Self> {
        match spec.kind {
            PenaltyKind::Standard => standard(spec.tau, k),
            PenaltyKind::Risk => {
                if k != 2 {
                    return Err(Error::NotBinary(k));
                }
                check_open_unit(spec.tau)?;
                Ok(Penalty::Risk { tau: spec.tau, positive })
            }
        }
    }

    /// Penalty for an instance whose true class is `truth`.
    pub(crate) fn apply(&self, scores: &[f64], truth: usize) -> f64 {
        let s = scores[truth];
        match *self {
            Penalty::Indicator => {
                if s >= max_score(scores) {
                    1.0
                } else {
                    0.0
                }
            }
            Penalty::Linear { tau, chance } => {
                if s < max_score(scores) {
                    0.0
                } else if s <= tau {
                    // raw-mode scores can put the max below chance
                    ((s - chance) / (tau - chance)).max(0.0)
                } else {
                    1.0
                }
            }
            Penalty::Risk { tau, positive } => {
                let hit = if truth == positive { s >= tau } else { s > 1.0 - tau };
                if hit {
                    1.0
                } else {
                    0.0
                }
            }
        }
    }
}

fn standard(tau: f64, k: usize) -> Result<Penalty> {
    let chance = 1.0 / k as f64;
    if tau.is_nan() || tau < chance - CHANCE_TOLERANCE {
        return Err(Error::TauBelowChance { tau, k });
    }
    if tau > 1.0 {
        return Err(Error::TauOutOfRange { tau, range: "[1/k, 1]" });
    }
    if (tau - chance).abs() <= CHANCE_TOLERANCE {
        Ok(Penalty::Indicator)
    } else {
        Ok(Penalty::Linear { tau, chance })
    }
}

pub(crate) fn check_open_unit(tau: f64) -> Result<()> {
    if tau > 0.0 && tau < 1.0 {
        Ok(())
    } else {
        Err(Error::TauOutOfRange { tau, range: "(0, 1)" })
    }
}

fn max_score(scores: &[f64]) -> f64 {
    scores.iter().copied().fold(f64::NEG_INFINITY, f64::max)
}

/// Standard confidence penalty for the class at `truth`, with `tau` in `[1/k, 1]`.
pub fn sigma_standard(scores: &[f64], truth: usize, tau: f64) -> Result<f64> {
    Ok(standard(tau, scores.len())?.apply(scores, truth))
}

/// Risk-threshold indicator for a binary score vector.
pub fn sigma_risk(scores: &[f64], truth: usize, tau: f64, positive: usize) -> Result<f64> {
    Ok(Penalty::new(PenaltySpec::risk(tau), scores.len(), positive)?.apply(scores, truth))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    #[test]
    fn standard_branches() {
        assert_eq!(sigma_standard(&[0.1, 0.9], 1, 0.8).unwrap(), 1.0);
        assert_abs_diff_eq!(sigma_standard(&[0.4, 0.6], 1, 0.8).unwrap(), 1.0 / 3.0, epsilon = 1e-15);
        assert_eq!(sigma_standard(&[0.6, 0.4], 1, 0.8).unwrap(), 0.0);
        assert_eq!(sigma_standard(&[0.5, 0.5], 0, 0.5).unwrap(), 1.0);
    }

    #[test]
    fn tie_at_max_interpolates() {
        // both tied classes sit at the max, so neither gets the zero branch
        assert_eq!(sigma_standard(&[0.5, 0.5], 1, 0.5).unwrap(), 1.0);
        let v = sigma_standard(&[0.45, 0.45, 0.1], 1, 0.9).unwrap();
        assert_abs_diff_eq!(v, (0.45 - 1.0 / 3.0) / (0.9 - 1.0 / 3.0), epsilon = 1e-15);
    }

    #[test]
    fn tau_at_one_and_s_at_one() {
        assert_eq!(sigma_standard(&[0.0, 1.0], 1, 1.0).unwrap(), 1.0);
    }

    #[test]
    fn tau_bounds() {
        assert!(matches!(sigma_standard(&[0.5, 0.5], 0, 0.4), Err(Error::TauBelowChance { .. })));
        assert!(matches!(sigma_standard(&[0.5, 0.5], 0, 1.1), Err(Error::TauOutOfRange { .. })));
        assert!(sigma_standard(&[0.2, 0.3, 0.5], 2, 1.0 / 3.0).is_ok());
    }

    #[test]
    fn raw_scores_below_chance_clamp_to_zero() {
        assert_eq!(sigma_standard(&[0.2, 0.3], 1, 0.8).unwrap(), 0.0);
    }

    #[test]
    fn risk_examples() {
        assert_eq!(sigma_risk(&[0.25, 0.75], 1, 0.7, 1).unwrap(), 1.0);
        assert_eq!(sigma_risk(&[0.35, 0.65], 0, 0.7, 1).unwrap(), 1.0);
        assert_eq!(sigma_risk(&[0.35, 0.65], 1, 0.7, 1).unwrap(), 0.0);
    }

    #[test]
    fn risk_boundaries_are_asymmetric() {
        assert_eq!(sigma_risk(&[0.3, 0.7], 1, 0.7, 1).unwrap(), 1.0);
        assert_eq!(sigma_risk(&[0.5, 0.5], 0, 0.5, 1).unwrap(), 0.0);
    }

    #[test]
    fn risk_errors() {
        assert!(matches!(sigma_risk(&[0.2, 0.3, 0.5], 0, 0.5, 1), Err(Error::NotBinary(3))));
        assert!(matches!(sigma_risk(&[0.5, 0.5], 0, 1.0, 1), Err(Error::TauOutOfRange { .. })));
        assert!(matches!(sigma_risk(&[0.5, 0.5], 0, 0.0, 1), Err(Error::TauOutOfRange { .. })));
    }

    fn simplex(k: usize) -> impl Strategy<Value = Vec<f64>> {
        prop::collection::vec(0.001f64..1.0, k).prop_map(|v| {
            let s: f64 = v.iter().sum();
            v.into_iter().map(|x| x / s).collect()
        })
    }

    proptest! {
        #[test]
        fn standard_in_unit_range(scores in simplex(3), truth in 0usize..3, tau in (1.0f64 / 3.0)..=1.0) {
            let v = sigma_standard(&scores, truth, tau).unwrap();
            prop_assert!((0.0..=1.0).contains(&v));
        }

        #[test]
        fn antitone_in_tau(scores in simplex(2), truth in 0usize..2, a in 0.5f64..=1.0, b in 0.5f64..=1.0) {
            let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
            prop_assert!(sigma_standard(&scores, truth, lo).unwrap() >= sigma_standard(&scores, truth, hi).unwrap());
        }

        #[test]
        fn monotone_in_true_score(other in 0.0f64..1.0, s1 in 0.0f64..1.0, s2 in 0.0f64..1.0, tau in 0.5f64..=1.0) {
            let (lo, hi) = if s1 <= s2 { (s1, s2) } else { (s2, s1) };
            let a = sigma_standard(&[other, lo], 1, tau).unwrap();
            let b = sigma_standard(&[other, hi], 1, tau).unwrap();
            prop_assert!(a <= b);
        }

        #[test]
        fn chance_tau_is_argmax_indicator(scores in simplex(5), truth in 0usize..5) {
            let v = sigma_standard(&scores, truth, 0.2).unwrap();
            let max = scores.iter().copied().fold(f64::MIN, f64::max);
            prop_assert_eq!(v, if scores[truth] >= max { 1.0 } else { 0.0 });
        }

        #[test]
        fn continuous_at_tau(tau in 0.51f64..1.0) {
            // s == tau lands in the interpolated branch and evaluates to one
            let v = sigma_standard(&[1.0 - tau, tau], 1, tau).unwrap();
            prop_assert!((v - 1.0).abs() < 1e-12);
        }
    }
}
