//! File formats, reports and the command pipelines.

pub mod annotations;
pub mod pipeline;
pub mod predictions;
pub mod report;
pub mod spec;

pub use annotations::{gold_from_dataset, parse_annotations, parse_gold, read_annotations, read_gold};
pub use predictions::{parse_predictions, read_predictions, write_predictions};
pub use report::{render_json, render_number, Report};
