//! The command pipelines behind the `hacc` binary: each turns file inputs
//! and textual arguments into a [`Report`].
//!
//! Parameter precedence: explicit argument, then `--params` document, then
//! elicited values, then the default (chance tau, uniform priorities,
//! constant complexity).

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use serde_json::{json, Map, Value};

use crate::analysis::{
    check_invariance, complexity_surface, nb_ha_curves, priority_sweep, tau_sweep, CmMetric, CmTransform, Execution,
    SurfaceConfig, SweepTable, RNG_ALGORITHM,
};
use crate::dataset::{Dataset, NormalizationMode};
use crate::elicitation::{
    aggregate_complexity, binarize_complexity, correct_confidence_distribution, derive_priorities_from_raters,
    quantile_thresholds, rater_performances, tau_from_confidence_distribution, two_level_complexity, AnnotationSet,
    ComplexityProfile, RaterPerformance, DEFAULT_COMPLEXITY_THRESHOLD, DEFAULT_QUANTILES,
};
use crate::error::{Error, Result};
use crate::io::annotations::{gold_from_dataset, parse_annotations, parse_gold};
use crate::io::predictions::parse_predictions;
use crate::io::report::{digest_file, Metadata, Report};
use crate::io::spec::{parse_complexity_arg, parse_priorities_arg, parse_tau_arg};
use crate::metrics::{
    auroc, balanced_accuracy, confident_accuracy, h_accuracy, net_benefit, practical_accuracy, prioritized_accuracy,
    regular_accuracy, risk_h_accuracy, standardized_net_benefit, youden_index, BinaryRates, HaParams,
};
use crate::params::{BinaryPriorities, ComplexityAssignment, PenaltyKind, PriorityVector};

pub const CHECK_RNG: &str = "ChaCha8Rng(seed_from_u64(seed))";
pub const DEFAULT_CONFIDENCE_FRACTION: f64 = 0.5;
pub const DEFAULT_CHECK_TRIALS: usize = 1000;

/// Where the predictions come from and how to read them.
#[derive(Debug, Clone, PartialEq)]
pub struct DataSource {
    pub predictions: PathBuf,
    pub mode: NormalizationMode,
    /// Positive label of a binary task; the second score column otherwise.
    pub positive_label: Option<String>,
}

impl DataSource {
    pub fn new(predictions: impl Into<PathBuf>) -> Self {
        DataSource { predictions: predictions.into(), mode: NormalizationMode::Soft, positive_label: None }
    }

    pub fn load(&self) -> Result<Dataset> {
        let ds = parse_predictions(&self.predictions, self.mode)?;
        match &self.positive_label {
            Some(label) => ds.with_positive(label),
            None => Ok(ds),
        }
    }
}

/// Textual H-accuracy parameters, as given on the command line.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ParamArgs {
    pub tau: Option<String>,
    pub priorities: Option<String>,
    pub complexity: Option<String>,
    pub penalty: PenaltyKind,
    /// A parameter document supplying whichever of the three is not given.
    pub params_file: Option<PathBuf>,
}

/// Parameters after resolution, with the source of each value.
#[derive(Debug, Clone, PartialEq)]
pub struct ResolvedParams {
    pub ha: HaParams,
    pub tau_source: String,
    pub priorities_source: String,
    pub complexity_source: String,
}

fn file_ref(path: &Path) -> String {
    format!("@{}", path.display())
}

pub fn resolve_params(args: &ParamArgs, dataset: &Dataset, elicited: Option<&Elicited>) -> Result<ResolvedParams> {
    let labels = dataset.label_set();
    let file = args.params_file.as_deref();
    let file_source = |p: &Path| format!("file:{}", p.display());

    let (tau, tau_source) = match (&args.tau, file, elicited) {
        (Some(t), _, _) => (parse_tau_arg(t)?, "argument".to_string()),
        (None, Some(p), _) => (parse_tau_arg(&file_ref(p))?, file_source(p)),
        (None, None, Some(e)) => (e.tau, "elicited".to_string()),
        (None, None, None) => {
            let tau = match args.penalty {
                PenaltyKind::Standard => labels.chance(),
                PenaltyKind::Risk => 0.5,
            };
            (tau, "default".to_string())
        }
    };
    let (priorities, priorities_source) = match (&args.priorities, file, elicited) {
        (Some(p), _, _) => (parse_priorities_arg(p, labels)?, "argument".to_string()),
        (None, Some(p), _) => (parse_priorities_arg(&file_ref(p), labels)?, file_source(p)),
        (None, None, Some(e)) => (e.priority_vector(dataset)?, "elicited".to_string()),
        (None, None, None) => (PriorityVector::uniform(labels.len()), "default".to_string()),
    };
    let (complexity, complexity_source) = match (&args.complexity, file, elicited) {
        (Some(c), _, _) => (parse_complexity_arg(c)?, "argument".to_string()),
        (None, Some(p), _) => (parse_complexity_arg(&file_ref(p))?, file_source(p)),
        (None, None, Some(e)) => (e.complexity.clone(), "elicited".to_string()),
        (None, None, None) => (ComplexityAssignment::default(), "default".to_string()),
    };
    Ok(ResolvedParams {
        ha: HaParams { tau, priorities, complexity, penalty: args.penalty },
        tau_source,
        priorities_source,
        complexity_source,
    })
}

fn complexity_json(c: &ComplexityAssignment) -> Value {
    match c {
        ComplexityAssignment::Constant(v) => json!({ "constant": v }),
        ComplexityAssignment::PerInstance(map) => json!({ "per_instance": map }),
    }
}

fn record_params(report: &mut Report, dataset: &Dataset, p: &ResolvedParams) {
    let priorities: Map<String, Value> = dataset
        .label_set()
        .labels()
        .iter()
        .zip(p.ha.priorities.weights())
        .map(|(l, &w)| (l.clone(), json!(w)))
        .collect();
    report.set_parameter("tau", json!(p.ha.tau), &p.tau_source);
    report.set_parameter("priorities", Value::Object(priorities), &p.priorities_source);
    report.set_parameter("complexity", complexity_json(&p.ha.complexity), &p.complexity_source);
    report.set_parameter("penalty", json!(p.ha.penalty.name()), "argument");
    if dataset.label_set().is_binary() {
        let ls = dataset.label_set();
        report.set_parameter("positive_label", json!(ls.label(ls.positive_index())), "argument");
    }
}

/// Every metric defined for the dataset and parameters.
///
/// Always: `accuracy`, `balanced_accuracy`, `h_accuracy`,
/// `prioritized_accuracy`, `practical_accuracy`; `confident_accuracy` with
/// the standard penalty; for binary data `auroc`, and when tau lies in
/// (0, 1) the risk-threshold family `net_benefit`,
/// `standardized_net_benefit`, `youden_index`, `risk_h_accuracy`.
pub fn compute_metrics(dataset: &Dataset, params: &HaParams) -> Result<BTreeMap<String, f64>> {
    let mut m = BTreeMap::new();
    m.insert("accuracy".to_string(), regular_accuracy(dataset));
    m.insert("balanced_accuracy".to_string(), balanced_accuracy(dataset)?);
    m.insert("h_accuracy".to_string(), h_accuracy(dataset, params)?);
    m.insert("prioritized_accuracy".to_string(), prioritized_accuracy(dataset, &params.priorities)?);
    m.insert("practical_accuracy".to_string(), practical_accuracy(dataset, &params.complexity)?);
    if params.penalty == PenaltyKind::Standard {
        m.insert("confident_accuracy".to_string(), confident_accuracy(dataset, params.tau)?);
    }
    if dataset.label_set().is_binary() {
        m.insert("auroc".to_string(), auroc(dataset)?);
        let tau = params.tau;
        if tau > 0.0 && tau < 1.0 {
            let rates = BinaryRates::at_risk_threshold(dataset, tau)?;
            m.insert("net_benefit".to_string(), net_benefit(&rates, tau)?);
            m.insert("standardized_net_benefit".to_string(), standardized_net_benefit(&rates, tau)?);
            m.insert("youden_index".to_string(), youden_index(&rates));
            m.insert("risk_h_accuracy".to_string(), risk_h_accuracy(dataset, tau)?);
        }
    }
    Ok(m)
}

fn data_metadata(source: &DataSource, timestamp: Option<String>) -> Result<Metadata> {
    Ok(Metadata { inputs: vec![digest_file("predictions", &source.predictions)?], timestamp, ..Default::default() })
}

pub fn compute(source: &DataSource, args: &ParamArgs, timestamp: Option<String>) -> Result<Report> {
    let dataset = source.load()?;
    let mut report = Report::new("compute");
    report.metadata = data_metadata(source, timestamp)?;
    if let Some(p) = &args.params_file {
        report.metadata.inputs.push(digest_file("params", p)?);
    }
    let params = resolve_params(args, &dataset, None)?;
    record_params(&mut report, &dataset, &params);
    report.metrics = compute_metrics(&dataset, &params.ha)?;
    Ok(report)
}

/// How complexity weights are derived from the per-case profile.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ComplexityRule {
    /// `1` above the threshold, `1/2` otherwise.
    TwoLevel(f64),
    /// `1` above the threshold, `0` otherwise.
    Binarize(f64),
}

impl Default for ComplexityRule {
    fn default() -> Self {
        ComplexityRule::TwoLevel(DEFAULT_COMPLEXITY_THRESHOLD)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ElicitArgs {
    pub annotations: PathBuf,
    /// Gold labels file; when absent the gold comes from the predictions.
    pub gold: Option<PathBuf>,
    pub decision: Option<String>,
    /// Positive gold label; the last in sorted order otherwise.
    pub positive_label: Option<String>,
    pub confidence_fraction: f64,
    pub complexity_rule: ComplexityRule,
    pub quantiles: Vec<f64>,
}

impl ElicitArgs {
    pub fn new(annotations: impl Into<PathBuf>) -> Self {
        ElicitArgs {
            annotations: annotations.into(),
            gold: None,
            decision: None,
            positive_label: None,
            confidence_fraction: DEFAULT_CONFIDENCE_FRACTION,
            complexity_rule: ComplexityRule::default(),
            quantiles: DEFAULT_QUANTILES.to_vec(),
        }
    }
}

/// Parameters derived from rater annotations.
#[derive(Debug, Clone, PartialEq)]
pub struct Elicited {
    pub tau: f64,
    pub confidence_fraction: f64,
    pub confidence_distribution: Vec<(f64, u64)>,
    pub negative_label: String,
    pub positive_label: String,
    pub rater_performance: Vec<RaterPerformance>,
    pub priorities: BinaryPriorities,
    pub profile: ComplexityProfile,
    pub quantiles: Vec<f64>,
    pub thresholds: Vec<f64>,
    pub complexity_rule: ComplexityRule,
    pub complexity: ComplexityAssignment,
}

impl Elicited {
    pub fn priority_vector(&self, dataset: &Dataset) -> Result<PriorityVector> {
        PriorityVector::from_pairs(
            dataset.label_set(),
            [
                (self.negative_label.as_str(), self.priorities.negative),
                (self.positive_label.as_str(), self.priorities.positive),
            ],
        )
    }

    /// The parameter document: `tau`, `priorities` and `complexity` at the
    /// top level, with the evidence behind them alongside.
    pub fn to_json(&self) -> Value {
        let distribution: Vec<Value> =
            self.confidence_distribution.iter().map(|&(level, n)| json!([level, n])).collect();
        let raters: Vec<Value> = self
            .rater_performance
            .iter()
            .map(|r| json!({ "rater_id": r.rater_id, "tpr": r.tpr, "tnr": r.tnr }))
            .collect();
        let thresholds: Map<String, Value> = self
            .quantiles
            .iter()
            .zip(&self.thresholds)
            .map(|(q, t)| (crate::io::report::render_number(*q), json!(t)))
            .collect();
        let complexity = match &self.complexity {
            ComplexityAssignment::PerInstance(map) => json!(map),
            ComplexityAssignment::Constant(v) => json!(v),
        };
        let rule = match self.complexity_rule {
            ComplexityRule::TwoLevel(t) => json!({ "kind": "two-level", "threshold": t }),
            ComplexityRule::Binarize(t) => json!({ "kind": "binarize", "threshold": t }),
        };
        json!({
            "tau": self.tau,
            "priorities": {
                self.negative_label.clone(): self.priorities.negative,
                self.positive_label.clone(): self.priorities.positive,
            },
            "complexity": complexity,
            "evidence": {
                "confidence_fraction": self.confidence_fraction,
                "confidence_distribution": distribution,
                "positive_label": self.positive_label,
                "rater_performance": raters,
                "complexity_profile": self.profile.per_case_mean,
                "complexity_rule": rule,
                "complexity_thresholds": thresholds,
            },
        })
    }
}

fn binary_gold_labels(set: &AnnotationSet, decision: Option<&str>, positive: Option<&str>) -> Result<(String, String)> {
    let labels = set.gold().labels(decision);
    if labels.len() != 2 {
        return Err(Error::NotBinary(labels.len()));
    }
    let positive = match positive {
        Some(p) if labels.contains(p) => p.to_string(),
        Some(p) => {
            return Err(Error::InvalidParameter(format!("positive label `{p}` does not occur in the gold labels")))
        }
        None => labels.iter().next_back().map(|s| s.to_string()).unwrap_or_default(),
    };
    let negative = labels.iter().find(|l| **l != positive).map(|s| s.to_string()).unwrap_or_default();
    Ok((negative, positive))
}

/// Loads annotations against `gold` (or the dataset's truth) and derives tau,
/// priorities and complexity weights.
pub fn elicit_from(args: &ElicitArgs, dataset: Option<&Dataset>) -> Result<(Elicited, Vec<PathBuf>)> {
    let mut inputs = vec![args.annotations.clone()];
    let gold = match (&args.gold, dataset) {
        (Some(path), _) => {
            inputs.push(path.clone());
            parse_gold(path)?
        }
        (None, Some(ds)) => gold_from_dataset(ds),
        (None, None) => {
            return Err(Error::InvalidParameter("gold labels are needed: give a gold file or predictions".into()))
        }
    };
    let set = parse_annotations(&args.annotations, gold)?;
    let decision = args.decision.as_deref();
    let (negative_label, positive_label) = binary_gold_labels(&set, decision, args.positive_label.as_deref())?;

    let confidence_distribution = correct_confidence_distribution(&set, decision)?;
    let tau = tau_from_confidence_distribution(&confidence_distribution, args.confidence_fraction)?;
    let rater_performance = rater_performances(&set, decision, &positive_label)?;
    let priorities = derive_priorities_from_raters(&rater_performance)?;
    let profile = aggregate_complexity(&set)?;
    let thresholds = quantile_thresholds(&profile, &args.quantiles)?;
    let complexity = match args.complexity_rule {
        ComplexityRule::TwoLevel(t) => two_level_complexity(&profile, t),
        ComplexityRule::Binarize(t) => binarize_complexity(&profile, t),
    };
    let elicited = Elicited {
        tau,
        confidence_fraction: args.confidence_fraction,
        confidence_distribution,
        negative_label,
        positive_label,
        rater_performance,
        priorities,
        profile,
        quantiles: args.quantiles.clone(),
        thresholds,
        complexity_rule: args.complexity_rule,
        complexity,
    };
    Ok((elicited, inputs))
}

/// The parameter document written by the `elicit` command, with a
/// `metadata` block.
pub fn elicit(args: &ElicitArgs, predictions: Option<&DataSource>, timestamp: Option<String>) -> Result<Value> {
    let dataset = predictions.map(DataSource::load).transpose()?;
    let (elicited, paths) = elicit_from(args, dataset.as_ref())?;
    let mut inputs = Vec::new();
    if let Some(src) = predictions {
        inputs.push(digest_file("predictions", &src.predictions)?);
    }
    inputs.push(digest_file("annotations", &paths[0])?);
    if let Some(g) = paths.get(1) {
        inputs.push(digest_file("gold", g)?);
    }
    let mut report = Report::new("elicit");
    report.metadata = Metadata { inputs, timestamp, ..Default::default() };
    let mut doc = elicited.to_json();
    doc["metadata"] = report.to_json()["metadata"].clone();
    Ok(doc)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepKind {
    Tau,
    Priority,
    Surface,
    NbHa,
}

impl std::str::FromStr for SweepKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "tau" => Ok(SweepKind::Tau),
            "priority" => Ok(SweepKind::Priority),
            "surface" => Ok(SweepKind::Surface),
            "nbha" => Ok(SweepKind::NbHa),
            other => Err(Error::InvalidParameter(format!("unknown sweep `{other}`"))),
        }
    }
}

// clean up accumulated step error so grid points print as written
fn tidy(v: f64) -> f64 {
    (v * 1e12).round() / 1e12
}

/// `start:stop:step` (inclusive) or a comma-separated list.
pub fn parse_grid(spec: &str) -> Result<Vec<f64>> {
    let num = |s: &str| {
        s.trim().parse::<f64>().map_err(|_| Error::InvalidParameter(format!("grid value `{s}` is not a number")))
    };
    let parts: Vec<&str> = spec.split(':').collect();
    match parts.as_slice() {
        [start, stop, step] => {
            let (start, stop, step) = (num(start)?, num(stop)?, num(step)?);
            if !(step.is_finite() && step > 0.0 && stop >= start) {
                return Err(Error::InvalidParameter(format!("bad grid range `{spec}`")));
            }
            let n = ((stop - start) / step + 1e-9).floor() as usize;
            Ok((0..=n).map(|i| tidy(start + i as f64 * step)).collect())
        }
        [_] => spec.split(',').map(num).collect(),
        _ => Err(Error::InvalidParameter(format!("grid `{spec}` is neither start:stop:step nor a list"))),
    }
}

fn steps(from: usize, to: usize) -> Vec<f64> {
    (from..=to).map(|i| tidy(i as f64 * 0.05)).collect()
}

/// Chance, then every multiple of 0.05 above it up to 1.
pub fn default_tau_grid(dataset: &Dataset) -> Vec<f64> {
    let chance = dataset.label_set().chance();
    let mut grid = vec![chance];
    grid.extend(steps(0, 20).into_iter().filter(|&t| t > chance));
    grid
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepArgs {
    pub kind: SweepKind,
    /// Grid for one-dimensional sweeps; a kind-specific default otherwise.
    pub grid: Option<Vec<f64>>,
    pub surface: SurfaceConfig,
}

pub fn sweep_table(dataset: &Dataset, args: &SweepArgs) -> Result<SweepTable> {
    let grid = |default: Vec<f64>| args.grid.clone().unwrap_or(default);
    match args.kind {
        SweepKind::Tau => tau_sweep(dataset, &grid(default_tau_grid(dataset))),
        SweepKind::Priority => priority_sweep(dataset, &grid(steps(0, 20))),
        SweepKind::NbHa => nb_ha_curves(dataset, &grid(steps(1, 19))),
        SweepKind::Surface => complexity_surface(dataset, &args.surface),
    }
}

pub fn sweep(source: &DataSource, args: &SweepArgs, timestamp: Option<String>) -> Result<Report> {
    let dataset = source.load()?;
    let mut report = Report::new("sweep");
    report.metadata = data_metadata(source, timestamp)?;
    if args.kind == SweepKind::Surface {
        report.metadata.seed = Some(args.surface.seed);
        report.metadata.rng = Some(RNG_ALGORITHM.to_string());
        report.set_parameter("samples_per_point", json!(args.surface.samples_per_point), "argument");
    }
    report.sweeps.push(sweep_table(&dataset, args)?);
    Ok(report)
}

pub fn default_check_metrics() -> Vec<CmMetric> {
    vec![CmMetric::PrevalenceWeightedHa, CmMetric::PrioritizedHa(BinaryPriorities { negative: 0.5, positive: 0.5 })]
}

/// One transform per invariance property.
pub fn default_check_transforms() -> Vec<CmTransform> {
    vec![
        CmTransform::ClassSwap,
        CmTransform::AddTn(10.0),
        CmTransform::AddTp(10.0),
        CmTransform::AddFn(10.0),
        CmTransform::AddFp(10.0),
        CmTransform::UniformScale(3.0),
        CmTransform::ColumnScale(2.0, 1.0),
        CmTransform::RowScale(2.0, 1.0),
    ]
}

#[derive(Debug, Clone, PartialEq)]
pub struct CheckArgs {
    pub metrics: Vec<CmMetric>,
    pub transforms: Vec<CmTransform>,
    pub trials: usize,
    pub seed: u64,
}

impl Default for CheckArgs {
    fn default() -> Self {
        CheckArgs {
            metrics: default_check_metrics(),
            transforms: default_check_transforms(),
            trials: DEFAULT_CHECK_TRIALS,
            seed: 0,
        }
    }
}

pub fn check(args: &CheckArgs, timestamp: Option<String>) -> Result<Report> {
    let mut report = Report::new("check");
    report.metadata =
        Metadata { seed: Some(args.seed), rng: Some(CHECK_RNG.to_string()), timestamp, ..Default::default() };
    report.set_parameter("trials", json!(args.trials), "argument");
    for &metric in &args.metrics {
        for &transform in &args.transforms {
            let verdict = check_invariance(metric, transform, args.trials, args.seed)?;
            report.checks.push(crate::io::report::CheckRecord { metric, transform, verdict });
        }
    }
    Ok(report)
}

/// Inputs of the combined `report` command.
#[derive(Debug, Clone, PartialEq)]
pub struct ReportArgs {
    pub params: ParamArgs,
    /// When given, elicited values fill parameters not set explicitly.
    pub elicit: Option<ElicitArgs>,
    pub surface: SurfaceConfig,
}

/// Metrics at the resolved parameters, the elicitation evidence when
/// annotations are given, and every sweep the data supports.
pub fn full_report(source: &DataSource, args: &ReportArgs, timestamp: Option<String>) -> Result<Report> {
    let dataset = source.load()?;
    let mut report = Report::new("report");
    report.metadata = data_metadata(source, timestamp)?;
    let elicited = match &args.elicit {
        Some(e) => {
            let (elicited, paths) = elicit_from(e, Some(&dataset))?;
            report.metadata.inputs.push(digest_file("annotations", &paths[0])?);
            if let Some(g) = paths.get(1) {
                report.metadata.inputs.push(digest_file("gold", g)?);
            }
            Some(elicited)
        }
        None => None,
    };
    if let Some(p) = &args.params.params_file {
        report.metadata.inputs.push(digest_file("params", p)?);
    }
    let params = resolve_params(&args.params, &dataset, elicited.as_ref())?;
    record_params(&mut report, &dataset, &params);
    report.metrics = compute_metrics(&dataset, &params.ha)?;
    report.elicitation = elicited.as_ref().map(Elicited::to_json);

    let mut kinds = vec![SweepKind::Tau];
    if dataset.label_set().is_binary() {
        kinds.extend([SweepKind::Priority, SweepKind::NbHa, SweepKind::Surface]);
        report.metadata.seed = Some(args.surface.seed);
        report.metadata.rng = Some(RNG_ALGORITHM.to_string());
        report.set_parameter("samples_per_point", json!(args.surface.samples_per_point), "argument");
    }
    for kind in kinds {
        let sweep_args = SweepArgs { kind, grid: None, surface: args.surface.clone() };
        report.sweeps.push(sweep_table(&dataset, &sweep_args)?);
    }
    Ok(report)
}

/// Serial or parallel surface evaluation.
pub fn execution(serial: bool) -> Execution {
    if serial {
        Execution::Serial
    } else {
        Execution::Parallel
    }
}
