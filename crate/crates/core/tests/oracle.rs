//! The bundled fixtures against their hand-derived and brute-force values.

use std::path::{Path, PathBuf};

use approx::assert_abs_diff_eq;
use hacc::io::spec::parse_complexity_arg;
use hacc::io::{parse_predictions, write_predictions};
use hacc::{
    auroc, balanced_accuracy, confident_accuracy, confusion_matrix, h_accuracy, practical_accuracy,
    prioritized_accuracy, regular_accuracy, HaParams, NormalizationMode, PenaltyKind, PriorityVector,
};
use serde_json::Value;

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fixtures").join(name)
}

#[test]
fn e1_hand_values() {
    let ds = parse_predictions(&fixture("e1.csv"), NormalizationMode::Soft).unwrap();
    let cm = confusion_matrix(&ds);
    assert_eq!(cm.cells(), (1.0, 1.0, 1.0, 1.0));
    assert_eq!(regular_accuracy(&ds), 0.5);
    assert_eq!(balanced_accuracy(&ds).unwrap(), 0.5);
    assert_eq!(confident_accuracy(&ds, 0.5).unwrap(), 0.5);
    assert_abs_diff_eq!(confident_accuracy(&ds, 0.8).unwrap(), 0.375, epsilon = 1e-15);
    let p = PriorityVector::binary(0.25, 0.75, ds.label_set()).unwrap();
    assert_eq!(prioritized_accuracy(&ds, &p).unwrap(), 0.5);
    assert_eq!(auroc(&ds).unwrap(), 0.75);
}

#[test]
fn e1_round_trips() {
    let ds = parse_predictions(&fixture("e1.csv"), NormalizationMode::Soft).unwrap();
    let text = write_predictions(&ds);
    assert_eq!(text, std::fs::read_to_string(fixture("e1.csv")).unwrap());
}

#[test]
fn synthetic_matches_brute_force() {
    let ds = parse_predictions(&fixture("synthetic60.csv"), NormalizationMode::Soft).unwrap();
    let oracle: Value =
        serde_json::from_str(&std::fs::read_to_string(fixture("synthetic60_oracle.json")).unwrap()).unwrap();
    let complexity = parse_complexity_arg(&format!("@{}", fixture("synthetic60_complexity.csv").display())).unwrap();

    assert_abs_diff_eq!(regular_accuracy(&ds), oracle["accuracy"].as_f64().unwrap(), epsilon = 1e-12);
    assert_abs_diff_eq!(
        balanced_accuracy(&ds).unwrap(),
        oracle["balanced_accuracy"].as_f64().unwrap(),
        epsilon = 1e-12
    );
    assert_abs_diff_eq!(auroc(&ds).unwrap(), oracle["auroc"].as_f64().unwrap(), epsilon = 1e-12);
    assert_abs_diff_eq!(
        practical_accuracy(&ds, &complexity).unwrap(),
        oracle["practical_accuracy"].as_f64().unwrap(),
        epsilon = 1e-12
    );
    for (tau, want) in oracle["confident_accuracy"].as_object().unwrap() {
        let got = confident_accuracy(&ds, tau.parse().unwrap()).unwrap();
        assert_abs_diff_eq!(got, want.as_f64().unwrap(), epsilon = 1e-12);
    }
    let params = HaParams {
        tau: 0.75,
        priorities: PriorityVector::binary(0.52, 0.48, ds.label_set()).unwrap(),
        complexity,
        penalty: PenaltyKind::Standard,
    };
    assert_abs_diff_eq!(
        h_accuracy(&ds, &params).unwrap(),
        oracle["combined_tau_0.75_p_0.48"].as_f64().unwrap(),
        epsilon = 1e-12
    );
}
