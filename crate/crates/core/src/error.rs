//! Error type shared by every module of the engine.

use std::fmt;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// A single dataset invariant violation found by [`crate::validate_dataset`].
#[derive(Debug, Clone, PartialEq)]
pub enum Violation {
    EmptyDataset,
    DuplicateId { id: String },
    UnknownLabel { id: String, label: String },
    WrongScoreCount { id: String, expected: usize, found: usize },
    ScoreOutOfRange { id: String, label: String, value: f64 },
    ScoresNotNormalized { id: String, sum: f64 },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::EmptyDataset => write!(f, "dataset has no instances"),
            Violation::DuplicateId { id } => write!(f, "duplicate instance id `{id}`"),
            Violation::UnknownLabel { id, label } => {
                write!(f, "instance `{id}`: true label `{label}` is not in the label set")
            }
            Violation::WrongScoreCount { id, expected, found } => {
                write!(f, "instance `{id}`: expected {expected} scores, found {found}")
            }
            Violation::ScoreOutOfRange { id, label, value } => {
                write!(f, "instance `{id}`: score for `{label}` is {value}, outside [0, 1]")
            }
            Violation::ScoresNotNormalized { id, sum } => {
                write!(f, "instance `{id}`: scores sum to {sum}, expected 1")
            }
        }
    }
}

/// Coarse classification of an error, used to pick a process exit code.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorCategory {
    Validation,
    Parameter,
    Io,
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid dataset:{}", render_violations(.0))]
    InvalidDataset(Vec<Violation>),

    #[error("invalid label set: {0}")]
    InvalidLabelSet(String),

    #[error("class `{0}` has no instances")]
    EmptyClass(String),

    #[error("class `{0}` has zero total complexity")]
    ZeroComplexityClass(String),

    #[error("tau {tau} is below chance level 1/{k}")]
    TauBelowChance { tau: f64, k: usize },

    #[error("tau {tau} is outside {range}")]
    TauOutOfRange { tau: f64, range: &'static str },

    #[error("operation requires a binary label set, found {0} labels")]
    NotBinary(usize),

    #[error("tau = 1 makes the net benefit weight tau/(1 - tau) diverge")]
    DegenerateAtOne,

    #[error("positive-class prevalence is {prevalence}, expected 0.5 (tolerance {tolerance})")]
    PrevalenceNotHalf { prevalence: f64, tolerance: f64 },

    #[error("invalid priorities: {0}")]
    InvalidPriorities(String),

    #[error("invalid complexity assignment: {0}")]
    InvalidComplexity(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("mean TPR and mean TNR are both zero")]
    DegenerateRaters,

    #[error("no correctly classified annotations")]
    NoCorrectAnnotations,

    #[error("no complexity annotation for instance `{0}`")]
    MissingComplexity(String),

    #[error("confusion matrix transform produces a negative cell")]
    NegativeCell,

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("line {line}: {field} value {value} is outside the declared scale 1..={max}")]
    OutOfScaleOrdinal { line: usize, field: &'static str, value: i64, max: u32 },

    #[error("line {line}: instance `{id}` has no gold label")]
    UnknownInstance { line: usize, id: String },

    #[error("line {line}: duplicate annotation for rater `{rater}`, instance `{instance}`, decision `{decision}`")]
    DuplicateAnnotation { line: usize, rater: String, instance: String, decision: String },

    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
}

fn render_violations(violations: &[Violation]) -> String {
    violations.iter().map(|v| format!("\n  - {v}")).collect()
}

impl Error {
    pub fn category(&self) -> ErrorCategory {
        match self {
            Error::InvalidDataset(_)
            | Error::InvalidLabelSet(_)
            | Error::EmptyClass(_)
            | Error::ZeroComplexityClass(_)
            | Error::NoCorrectAnnotations
            | Error::MissingComplexity(_)
            | Error::Parse { .. }
            | Error::OutOfScaleOrdinal { .. }
            | Error::UnknownInstance { .. }
            | Error::DuplicateAnnotation { .. } => ErrorCategory::Validation,
            Error::TauBelowChance { .. }
            | Error::TauOutOfRange { .. }
            | Error::NotBinary(_)
            | Error::DegenerateAtOne
            | Error::PrevalenceNotHalf { .. }
            | Error::InvalidPriorities(_)
            | Error::InvalidComplexity(_)
            | Error::InvalidParameter(_)
            | Error::DegenerateRaters
            | Error::NegativeCell => ErrorCategory::Parameter,
            Error::Io { .. } => ErrorCategory::Io,
        }
    }

    pub(crate) fn parse(line: usize, message: impl Into<String>) -> Self {
        Error::Parse { line, message: message.into() }
    }

    pub(crate) fn io(path: &std::path::Path, source: std::io::Error) -> Self {
        Error::Io { path: path.display().to_string(), source }
    }
}
