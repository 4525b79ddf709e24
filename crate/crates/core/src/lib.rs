//! H-accuracy: classifier accuracy that penalizes unconfident correct
//! predictions, weights classes by priority and instances by complexity.
//!
//! ```
//! use hacc::{Dataset, Instance, LabelSet, NormalizationMode};
//!
//! let labels = LabelSet::new(["neg", "pos"])?;
//! let data = Dataset::new(
//!     labels,
//!     vec![
//!         Instance::new("x1", "neg", vec![0.9, 0.1]),
//!         Instance::new("x2", "neg", vec![0.4, 0.6]),
//!         Instance::new("x3", "pos", vec![0.35, 0.65]),
//!         Instance::new("x4", "pos", vec![0.7, 0.3]),
//!     ],
//!     NormalizationMode::Soft,
//! )?;
//!
//! assert_eq!(hacc::balanced_accuracy(&data)?, 0.5);
//! // the correct positive at 0.65 is only half-way from chance to tau = 0.8
//! assert!((hacc::confident_accuracy(&data, 0.8)? - 0.375).abs() < 1e-15);
//! # Ok::<(), hacc::Error>(())
//! ```
//!
//! Modules:
//!
//! * [`dataset`] labels, score vectors, validation, the argmax rule and
//!   confusion matrices
//! * [`penalty`] the standard and risk-threshold penalty functions
//! * [`metrics`] accuracy, balanced accuracy, H-accuracy and its named
//!   instances, net benefit, Youden index, ROC
//! * [`elicitation`] tau, priorities and complexity from rater annotations
//! * [`analysis`] parameter sweeps and the invariance harness
//! * [`io`] CSV readers and writers, reports, and the command pipelines

pub mod analysis;
pub mod confusion;
pub mod dataset;
pub mod elicitation;
mod error;
pub mod io;
pub mod metrics;
pub mod params;
pub mod penalty;

pub use confusion::ConfusionMatrix;
pub use dataset::{
    argmax_index, argmax_label, confusion_matrix, validate_dataset, Dataset, Instance, LabelSet, NormalizationMode,
    ScoreVector,
};
pub use error::{Error, ErrorCategory, Result, Violation};
pub use metrics::{
    auroc, balanced_accuracy, confident_accuracy, h_accuracy, net_benefit, net_benefit_via_ha, practical_accuracy,
    prioritized_accuracy, regular_accuracy, roc_points, standardized_nb_via_ha, standardized_net_benefit, youden_index,
    BinaryRates, HaParams, PrevalenceCheck,
};
pub use params::{BinaryPriorities, ComplexityAssignment, PenaltyKind, PenaltySpec, PriorityVector};
pub use penalty::{sigma_risk, sigma_standard};
