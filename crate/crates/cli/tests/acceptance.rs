//! Acceptance suite: one PASS/FAIL line per criterion, non-zero exit if any
//! criterion fails.

use std::collections::BTreeMap;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::{Path, PathBuf};
use std::process::Command;
use std::time::{Duration, Instant};

use hacc::analysis::{check_invariance, complexity_surface, CmMetric, CmTransform, Execution, SurfaceConfig, Verdict};
use hacc::elicitation::{
    aggregate_complexity, binarize_complexity, derive_priorities_from_raters, derive_tau_from_confidence,
    tau_from_confidence_distribution, AnnotationSet, ComplexityProfile, Gold, RaterAnnotation, RaterPerformance,
};
use hacc::io::spec::parse_complexity_arg;
use hacc::io::{parse_annotations, parse_gold, parse_predictions};
use hacc::metrics::{class_recalls, risk_h_accuracy};
use hacc::{
    balanced_accuracy, confident_accuracy, h_accuracy, net_benefit, net_benefit_via_ha, practical_accuracy,
    prioritized_accuracy, regular_accuracy, standardized_net_benefit, youden_index, BinaryRates, ComplexityAssignment,
    ConfusionMatrix, Dataset, HaParams, Instance, LabelSet, NormalizationMode, PenaltyKind, PriorityVector,
};
use rand::{seq::SliceRandom, Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fixtures").join(name)
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(limit: Duration, start: Instant) -> Result<(), String> {
    let took = start.elapsed();
    ensure(took < limit, || format!("took {took:?}, limit {limit:?}"))
}

fn labels(k: usize) -> LabelSet {
    if k == 2 {
        LabelSet::new(["neg", "pos"]).unwrap()
    } else {
        LabelSet::new((0..k).map(|i| format!("c{i}"))).unwrap()
    }
}

// Dirichlet(1) scores: continuous, so argmax ties have probability zero
fn simplex(rng: &mut ChaCha8Rng, k: usize) -> Vec<f64> {
    let e: Vec<f64> = (0..k).map(|_| -(1.0 - rng.gen::<f64>()).ln()).collect();
    let total: f64 = e.iter().sum();
    e.iter().map(|x| x / total).collect()
}

/// `n` instances over `k` classes; every class occurs. With `balanced`, the
/// classes of a binary set have equal size.
fn random_dataset(rng: &mut ChaCha8Rng, k: usize, n: usize, balanced: bool) -> Dataset {
    let ls = labels(k);
    let mut truth: Vec<usize> = if balanced {
        (0..n).map(|i| i % k).collect()
    } else {
        (0..n).map(|i| if i < k { i } else { rng.gen_range(0..k) }).collect()
    };
    truth.shuffle(rng);
    let instances =
        truth.iter().enumerate().map(|(i, &t)| Instance::new(format!("x{i}"), ls.label(t), simplex(rng, k))).collect();
    Dataset::new(ls, instances, NormalizationMode::Soft).unwrap()
}

fn scores(ds: &Dataset) -> impl Iterator<Item = (usize, &[f64])> {
    ds.iter_scored()
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut worst = 0.0f64;
    let mut count = 0;
    for k in [2usize, 3, 5] {
        for _ in 0..70 {
            let n = rng.gen_range(k.max(2)..=200);
            let ds = random_dataset(&mut rng, k, n, false);
            let ha = h_accuracy(&ds, &HaParams::balanced(k)).map_err(|e| e.to_string())?;
            let ba = balanced_accuracy(&ds).map_err(|e| e.to_string())?;
            worst = worst.max((ha - ba).abs());
            count += 1;
        }
    }
    ensure(worst <= 1e-12, || format!("max |Ha - Ba| = {worst:e}"))?;
    within(Duration::from_secs(5), start)?;
    Ok(format!("{count} datasets, max |Ha - Ba| = {worst:e}"))
}

/// Net benefit straight from its definition, with rates induced by the risk
/// threshold: a positive counts as detected at score >= tau, a negative as
/// rejected at negative score > 1 - tau.
fn direct_net_benefit(ds: &Dataset, tau: f64) -> f64 {
    let (mut tp, mut pos, mut fp, mut neg) = (0.0, 0.0, 0.0, 0.0);
    for (t, s) in scores(ds) {
        if t == 1 {
            pos += 1.0;
            if s[1] >= tau {
                tp += 1.0;
            }
        } else {
            neg += 1.0;
            if s[0] <= 1.0 - tau {
                fp += 1.0;
            }
        }
    }
    let pi = pos / (pos + neg);
    (tp / pos) * pi - (1.0 - pi) * tau / (1.0 - tau) * (fp / neg)
}

fn tau_grid() -> Vec<f64> {
    (1..=19).map(|i| i as f64 * 0.05).collect()
}

fn criterion_2() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut worst = 0.0f64;
    for _ in 0..100 {
        let n = rng.gen_range(2..=200);
        let ds = random_dataset(&mut rng, 2, n, false);
        for tau in tau_grid() {
            let via_ha = net_benefit_via_ha(&ds, tau).map_err(|e| e.to_string())?;
            worst = worst.max((via_ha - direct_net_benefit(&ds, tau)).abs());
        }
    }
    ensure(worst <= 1e-10, || format!("max |NB_Ha - NB| = {worst:e}"))?;
    within(Duration::from_secs(5), start)?;
    Ok(format!("100 datasets x 19 thresholds, max deviation {worst:e}"))
}

fn criterion_3() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let (mut ba_gap, mut j_gap, mut snb_gap) = (0.0f64, 0.0f64, 0.0f64);
    for _ in 0..100 {
        let n = 2 * rng.gen_range(1..=100);
        let ds = random_dataset(&mut rng, 2, n, true);
        let rates = BinaryRates::at_risk_threshold(&ds, 0.5).map_err(|e| e.to_string())?;
        let nb = net_benefit(&rates, 0.5).map_err(|e| e.to_string())?;
        let ba = balanced_accuracy(&ds).map_err(|e| e.to_string())?;
        ba_gap = ba_gap.max((nb - (ba - 0.5)).abs());
        j_gap = j_gap.max((nb - youden_index(&rates) / 2.0).abs());
        for tau in tau_grid() {
            let rates = BinaryRates::at_risk_threshold(&ds, tau).map_err(|e| e.to_string())?;
            let snb = standardized_net_benefit(&rates, tau).map_err(|e| e.to_string())?;
            let params = HaParams {
                tau,
                priorities: PriorityVector::new(vec![tau, 1.0 - tau]).map_err(|e| e.to_string())?,
                complexity: ComplexityAssignment::Constant(1.0),
                penalty: PenaltyKind::Risk,
            };
            let ha = h_accuracy(&ds, &params).map_err(|e| e.to_string())?;
            snb_gap = snb_gap.max(((1.0 - tau) * snb - (ha - tau)).abs());
        }
    }
    ensure(ba_gap <= 1e-12, || format!("|NB(0.5) - (Ba - 0.5)| = {ba_gap:e}"))?;
    ensure(j_gap <= 1e-12, || format!("|NB(0.5) - J/2| = {j_gap:e}"))?;
    ensure(snb_gap <= 1e-10, || format!("sNB relation gap {snb_gap:e}"))?;
    Ok(format!("100 balanced datasets; gaps {ba_gap:e}, {j_gap:e}, sNB {snb_gap:e}"))
}

fn prioritized(negative: f64, positive: f64) -> CmMetric {
    CmMetric::PrioritizedHa(hacc::BinaryPriorities { negative, positive })
}

fn holds(metric: CmMetric, t: CmTransform, seed: u64) -> Result<(), String> {
    match check_invariance(metric, t, 1000, seed).map_err(|e| e.to_string())? {
        Verdict::Invariant { .. } => Ok(()),
        Verdict::Violated(ce) => {
            Err(format!("{metric} under {t}: {} -> {} on {:?}", ce.before, ce.after, ce.original.cells()))
        }
    }
}

fn criterion_4() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut checked = 0;
    // uniform scaling for arbitrary fixed priorities
    for seed in 0..5 {
        let p1: f64 = rng.gen();
        holds(prioritized(1.0 - p1, p1), CmTransform::UniformScale(1.0 + 9.0 * rng.gen::<f64>()), seed)?;
        checked += 1;
    }
    // prevalence weights reduce to regular accuracy
    let mut worst = 0.0f64;
    for _ in 0..1000 {
        let c: Vec<f64> = (0..4).map(|_| 1.0 + 100.0 * rng.gen::<f64>()).collect();
        let cm = ConfusionMatrix::binary(c[0], c[1], c[2], c[3]).map_err(|e| e.to_string())?;
        let acc = (c[0] + c[3]) / cm.total();
        worst = worst.max((CmMetric::PrevalenceWeightedHa.evaluate(&cm) - acc).abs());
    }
    ensure(worst <= 1e-12, || format!("prevalence-weighted Ha differs from accuracy by {worst:e}"))?;
    holds(CmMetric::PrevalenceWeightedHa, CmTransform::ClassSwap, 10)?;
    // specificity only
    for t in [CmTransform::AddTp(7.0), CmTransform::AddFn(7.0), CmTransform::RowScale(3.0, 0.5)] {
        holds(prioritized(1.0, 0.0), t, 11)?;
        checked += 1;
    }
    // sensitivity only
    for t in [CmTransform::AddTn(7.0), CmTransform::AddFp(7.0), CmTransform::RowScale(0.5, 3.0)] {
        holds(prioritized(0.0, 1.0), t, 12)?;
        checked += 1;
    }
    // column scaling is refuted: tp=1, fn=2, fp=3, tn=4 with the positive column doubled
    let original = ConfusionMatrix::binary(1.0, 2.0, 3.0, 4.0).map_err(|e| e.to_string())?;
    let stored = ConfusionMatrix::binary(2.0, 2.0, 6.0, 4.0).map_err(|e| e.to_string())?;
    let transformed =
        hacc::analysis::apply_cm_transform(&original, CmTransform::ColumnScale(2.0, 1.0)).map_err(|e| e.to_string())?;
    ensure(transformed == stored, || format!("column scaling gave {:?}", transformed.cells()))?;
    let metric = prioritized(0.5, 0.5);
    let (before, after) = (metric.evaluate(&original), metric.evaluate(&stored));
    ensure((before - (2.0 / 7.0 + 1.0 / 6.0)).abs() <= 1e-12 && (after - 0.45).abs() <= 1e-12, || {
        format!("counterexample values {before} -> {after}")
    })?;
    let refuted = !check_invariance(metric, CmTransform::ColumnScale(2.0, 1.0), 1000, 13)
        .map_err(|e| e.to_string())?
        .is_invariant();
    ensure(refuted, || "random search found no column-scale violation".into())?;
    within(Duration::from_secs(10), start)?;
    Ok(format!("{} properties x 1000 matrices hold; column scaling refuted ({before:.6} -> {after:.6})", checked + 1))
}

fn criterion_5() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut worst_rise = 0.0f64;
    let mut worst_residual = 0.0f64;
    for d in 0..100 {
        let k = [2, 3, 5][d % 3];
        let n = rng.gen_range(k.max(2)..=200);
        let ds = random_dataset(&mut rng, k, n, false);
        let chance = 1.0 / k as f64;
        let mut previous = f64::INFINITY;
        for i in 0..50 {
            let tau = chance + (1.0 - chance) * i as f64 / 49.0;
            let v = confident_accuracy(&ds, tau).map_err(|e| e.to_string())?;
            worst_rise = worst_rise.max(v - previous);
            previous = v;
        }
        let recalls = class_recalls(&ds).map_err(|e| e.to_string())?;
        let p = simplex(&mut rng, k);
        let q = simplex(&mut rng, k);
        let lambda: f64 = rng.gen();
        let mix: Vec<f64> = p.iter().zip(&q).map(|(a, b)| lambda * a + (1.0 - lambda) * b).collect();
        let eval = |w: &[f64]| -> Result<f64, String> {
            let v = PriorityVector::new(w.to_vec()).map_err(|e| e.to_string())?;
            prioritized_accuracy(&ds, &v).map_err(|e| e.to_string())
        };
        let (hp, hq, hm) = (eval(&p)?, eval(&q)?, eval(&mix)?);
        let weighted: f64 = p.iter().zip(&recalls).map(|(a, r)| a * r).sum();
        worst_residual = worst_residual.max((hm - (lambda * hp + (1.0 - lambda) * hq)).abs());
        worst_residual = worst_residual.max((hp - weighted).abs());
    }
    ensure(worst_rise <= 1e-12, || format!("confident accuracy rose by {worst_rise:e}"))?;
    ensure(worst_residual <= 1e-12, || format!("priority linearity residual {worst_residual:e}"))?;
    Ok(format!("max rise {worst_rise:e}, max linearity residual {worst_residual:e}"))
}

fn close(name: &str, got: f64, want: f64, tol: f64) -> Result<(), String> {
    ensure((got - want).abs() <= tol, || format!("{name}: got {got}, oracle {want}"))
}

fn criterion_6() -> Outcome {
    let e1 = parse_predictions(&fixture("e1.csv"), NormalizationMode::Soft).map_err(|e| e.to_string())?;
    ensure(regular_accuracy(&e1) == 0.5, || "E1 accuracy".into())?;
    ensure(balanced_accuracy(&e1).map_err(|e| e.to_string())? == 0.5, || "E1 balanced accuracy".into())?;
    close("E1 Ha(tau=0.8)", confident_accuracy(&e1, 0.8).map_err(|e| e.to_string())?, 0.375, 1e-12)?;
    let favor_pos = PriorityVector::binary(0.25, 0.75, e1.label_set()).map_err(|e| e.to_string())?;
    close("E1 Ha(p(pos)=0.75)", prioritized_accuracy(&e1, &favor_pos).map_err(|e| e.to_string())?, 0.5, 1e-12)?;

    let ds = parse_predictions(&fixture("synthetic60.csv"), NormalizationMode::Soft).map_err(|e| e.to_string())?;
    let text = std::fs::read_to_string(fixture("synthetic60_oracle.json")).map_err(|e| e.to_string())?;
    let oracle: serde_json::Value = serde_json::from_str(&text).map_err(|e| e.to_string())?;
    let table = |key: &str| -> BTreeMap<String, f64> {
        oracle[key].as_object().unwrap().iter().map(|(k, v)| (k.clone(), v.as_f64().unwrap())).collect()
    };
    let scalar = |key: &str| oracle[key].as_f64().unwrap();
    let complexity = parse_complexity_arg(&format!("@{}", fixture("synthetic60_complexity.csv").display()))
        .map_err(|e| e.to_string())?;
    let mut compared = 0;
    let mut check = |name: String, got: hacc::Result<f64>, want: f64| -> Result<(), String> {
        compared += 1;
        close(&name, got.map_err(|e| e.to_string())?, want, 1e-12)
    };
    check("accuracy".into(), Ok(regular_accuracy(&ds)), scalar("accuracy"))?;
    check("balanced_accuracy".into(), balanced_accuracy(&ds), scalar("balanced_accuracy"))?;
    check("auroc".into(), hacc::auroc(&ds), scalar("auroc"))?;
    check("practical_accuracy".into(), practical_accuracy(&ds, &complexity), scalar("practical_accuracy"))?;
    let combined = HaParams {
        tau: 0.75,
        priorities: PriorityVector::binary(0.52, 0.48, ds.label_set()).map_err(|e| e.to_string())?,
        complexity: complexity.clone(),
        penalty: PenaltyKind::Standard,
    };
    check("combined".into(), h_accuracy(&ds, &combined), scalar("combined_tau_0.75_p_0.48"))?;
    for (tau, want) in table("confident_accuracy") {
        check(format!("confident_accuracy({tau})"), confident_accuracy(&ds, tau.parse().unwrap()), want)?;
    }
    for (p1, want) in table("prioritized_accuracy") {
        let p1: f64 = p1.parse().unwrap();
        let p = PriorityVector::binary(1.0 - p1, p1, ds.label_set()).map_err(|e| e.to_string())?;
        check(format!("prioritized_accuracy({p1})"), prioritized_accuracy(&ds, &p), want)?;
    }
    for (key, want) in table("net_benefit") {
        let tau: f64 = key.parse().unwrap();
        let rates = BinaryRates::at_risk_threshold(&ds, tau).map_err(|e| e.to_string())?;
        check(format!("net_benefit({key})"), net_benefit(&rates, tau), want)?;
        check(format!("net_benefit_via_ha({key})"), net_benefit_via_ha(&ds, tau), want)?;
        check(
            format!("standardized_net_benefit({key})"),
            standardized_net_benefit(&rates, tau),
            table("standardized_net_benefit")[&key],
        )?;
        check(format!("youden_index({key})"), Ok(youden_index(&rates)), table("youden_index")[&key])?;
        check(format!("risk_h_accuracy({key})"), risk_h_accuracy(&ds, tau), table("risk_h_accuracy")[&key])?;
    }
    Ok(format!("E1 hand values exact; {compared} synthetic oracle values within 1e-12"))
}

fn criterion_7() -> Outcome {
    let single = derive_priorities_from_raters(&[RaterPerformance::new("r", 0.72, 0.78).map_err(|e| e.to_string())?])
        .map_err(|e| e.to_string())?;
    ensure(single.negative == 0.52 && single.positive == 0.48, || format!("got {single:?}"))?;
    let pair = derive_priorities_from_raters(&[
        RaterPerformance::new("a", 0.70, 0.80).map_err(|e| e.to_string())?,
        RaterPerformance::new("b", 0.74, 0.76).map_err(|e| e.to_string())?,
    ])
    .map_err(|e| e.to_string())?;
    close("two-rater p(neg)", pair.negative, 0.52, 1e-12)?;
    close("two-rater p(pos)", pair.positive, 0.48, 1e-12)?;

    let distribution = [(1.0, 30), (0.75, 20), (0.6, 10), (0.5, 5)];
    let tau = tau_from_confidence_distribution(&distribution, 0.5).map_err(|e| e.to_string())?;
    ensure(tau == 0.75, || format!("tau from distribution: {tau}"))?;
    // the same distribution as annotations on a 1..20 scale
    let mut gold = Gold::new();
    gold.insert("case", "yes");
    let mut annotations = Vec::new();
    for (level, count) in [(20u32, 30), (15, 20), (12, 10), (10, 5)] {
        for _ in 0..count {
            annotations.push(RaterAnnotation {
                rater_id: format!("r{:02}", annotations.len()),
                instance_id: "case".into(),
                assigned_labels: [("acl".to_string(), "yes".to_string())].into(),
                confidence: level,
                complexity: 1,
            });
        }
    }
    let set = AnnotationSet::new(annotations, 20, 5, gold).map_err(|e| e.to_string())?;
    let tau = derive_tau_from_confidence(&set, 0.5, None).map_err(|e| e.to_string())?;
    ensure(tau == 0.75, || format!("tau from annotations: {tau}"))?;

    // strict inequality at the threshold
    let profile = ComplexityProfile::from_means([("a", 2.75), ("b", 2.76), ("c", 3.0), ("d", 1.0), ("e", 2.7499)]);
    let hand = ComplexityAssignment::per_instance([("a", 0.0), ("b", 1.0), ("c", 1.0), ("d", 0.0), ("e", 0.0)])
        .map_err(|e| e.to_string())?;
    let got = binarize_complexity(&profile, 2.75);
    ensure(got == hand, || format!("binarized {got:?}"))?;
    let study_gold = parse_gold(&fixture("study_gold.csv")).map_err(|e| e.to_string())?;
    let study = parse_annotations(&fixture("study_annotations.csv"), study_gold).map_err(|e| e.to_string())?;
    let got = binarize_complexity(&aggregate_complexity(&study).map_err(|e| e.to_string())?, 2.75);
    let hand = ComplexityAssignment::per_instance([("c1", 0.0), ("c2", 1.0), ("c3", 0.0), ("c4", 1.0)])
        .map_err(|e| e.to_string())?;
    ensure(got == hand, || format!("study fixture binarized {got:?}"))?;
    Ok("priorities (0.52, 0.48), tau 0.75, strict binarization at 2.75".into())
}

fn hacc_bin(args: &[&str]) -> Result<Vec<u8>, String> {
    let out = Command::new(env!("CARGO_BIN_EXE_hacc")).args(args).output().map_err(|e| e.to_string())?;
    ensure(out.status.success(), || {
        format!("hacc {} failed: {}", args.join(" "), String::from_utf8_lossy(&out.stderr))
    })?;
    Ok(out.stdout)
}

fn criterion_8() -> Outcome {
    let predictions = fixture("synthetic60.csv");
    let predictions = predictions.to_str().unwrap();
    let report = ["report", predictions, "--seed", "17", "--samples", "50", "--timestamp", "2020-01-01T00:00:00Z"];
    let first = hacc_bin(&report)?;
    let second = hacc_bin(&report)?;
    ensure(first == second, || "report output differs between runs".into())?;
    let text = String::from_utf8(first.clone()).map_err(|e| e.to_string())?;
    ensure(text.contains("\"seed\": 17"), || "seed missing from report metadata".into())?;

    let surface = ["sweep", "surface", predictions, "--seed", "17", "--samples", "50"];
    let parallel = hacc_bin(&surface)?;
    let serial = hacc_bin(&[&surface[..], &["--serial"]].concat())?;
    ensure(parallel == serial, || "serial and parallel surface output differ".into())?;

    let ds = parse_predictions(&fixture("synthetic60.csv"), NormalizationMode::Soft).map_err(|e| e.to_string())?;
    let config = SurfaceConfig { seed: 99, samples_per_point: 30, ..Default::default() };
    let a = complexity_surface(&ds, &SurfaceConfig { execution: Execution::Parallel, ..config.clone() })
        .map_err(|e| e.to_string())?;
    let b = complexity_surface(&ds, &SurfaceConfig { execution: Execution::Serial, ..config })
        .map_err(|e| e.to_string())?;
    ensure(a == b, || "library surface tables differ".into())?;
    Ok(format!("report {} bytes identical twice; surface serial == parallel", first.len()))
}

fn criterion_9() -> Outcome {
    let e1 = parse_predictions(&fixture("e1.csv"), NormalizationMode::Soft).map_err(|e| e.to_string())?;
    let priorities: Vec<f64> = (0..=10).map(|i| i as f64 / 10.0).collect();
    let config = SurfaceConfig {
        proportions: vec![0.0, 1.0],
        priorities: priorities.clone(),
        samples_per_point: 100,
        seed: 9,
        execution: Execution::Parallel,
    };
    let table = complexity_surface(&e1, &config).map_err(|e| e.to_string())?;
    for row in &table.rows {
        let p1 = row.point[1];
        let p = PriorityVector::binary(1.0 - p1, p1, e1.label_set()).map_err(|e| e.to_string())?;
        let want = prioritized_accuracy(&e1, &p).map_err(|e| e.to_string())?;
        ensure(row.values[0] == want && row.values[1] == 0.0, || {
            format!("q={} p1={p1}: mean {} var {} vs {want}", row.point[0], row.values[0], row.values[1])
        })?;
    }

    let ids: Vec<String> = e1.instances().iter().map(|x| x.id.clone()).collect();
    let mut exhaustive = Vec::new();
    for i in 0..ids.len() {
        for j in i + 1..ids.len() {
            let weights = ids.iter().enumerate().map(|(m, id)| (id.clone(), if m == i || m == j { 1.0 } else { 0.5 }));
            let params = HaParams {
                complexity: ComplexityAssignment::per_instance(weights).map_err(|e| e.to_string())?,
                ..HaParams::balanced(2)
            };
            exhaustive.push(h_accuracy(&e1, &params).map_err(|e| e.to_string())?);
        }
    }
    let average = exhaustive.iter().sum::<f64>() / exhaustive.len() as f64;
    let config = SurfaceConfig {
        proportions: vec![0.5],
        priorities: vec![0.5],
        samples_per_point: 1000,
        seed: 9,
        execution: Execution::Parallel,
    };
    let row = &complexity_surface(&e1, &config).map_err(|e| e.to_string())?.rows[0];
    let (mean, se) = (row.values[0], row.values[2]);
    ensure(exhaustive.len() == 6, || "expected 6 subsets".into())?;
    ensure((mean - average).abs() <= 3.0 * se, || format!("mean {mean} vs exhaustive {average}, se {se}"))?;
    Ok(format!("q in {{0, 1}} exact with zero variance; q=0.5 mean {mean:.6} vs exhaustive {average:.6} (se {se:.6})"))
}

fn main() {
    let criteria: [Criterion; 9] = [
        ("balanced accuracy as the chance-tau special case", criterion_1),
        ("net benefit through risk H-accuracy", criterion_2),
        ("prevalence one half corollaries", criterion_3),
        ("confusion matrix invariances", criterion_4),
        ("tau monotonicity and priority linearity", criterion_5),
        ("fixture oracles", criterion_6),
        ("elicitation", criterion_7),
        ("determinism", criterion_8),
        ("complexity surface", criterion_9),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|panic| {
            let msg = panic
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| panic.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {msg}"))
        });
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("criterion {}: PASS  {name} ({detail}; {secs:.2}s)", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {}: FAIL  {name} ({why}; {secs:.2}s)", i + 1);
            }
        }
    }
    println!("acceptance: {} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
