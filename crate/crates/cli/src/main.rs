//! `hacc`: H-accuracy metrics from the command line.
//!
//! Exit status: 0 success, 2 invalid input data, 3 invalid parameters or
//! usage, 4 I/O failure.

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use hacc::analysis::{CmMetric, CmTransform, SurfaceConfig};
use hacc::elicitation::DEFAULT_COMPLEXITY_THRESHOLD;
use hacc::io::pipeline::{
    self, CheckArgs, ComplexityRule, DataSource, ElicitArgs, ParamArgs, ReportArgs, SweepArgs, SweepKind,
};
use hacc::io::{render_json, Report};
use hacc::{ErrorCategory, NormalizationMode, PenaltyKind};

const EXIT_VALIDATION: u8 = 2;
const EXIT_PARAMETER: u8 = 3;
const EXIT_IO: u8 = 4;

#[derive(Parser)]
#[command(
    name = "hacc",
    version,
    about = "H-accuracy: confidence-, priority- and complexity-aware classifier accuracy"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute every applicable metric for a predictions file.
    Compute {
        #[command(flatten)]
        data: DataArgs,
        #[command(flatten)]
        params: ParamFlags,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Derive tau, priorities and complexity weights from rater annotations.
    Elicit {
        #[command(flatten)]
        elicit: ElicitFlags,
        /// Predictions whose true labels serve as gold when --gold is absent.
        #[arg(long)]
        predictions: Option<PathBuf>,
        /// Write the parameter document here instead of stdout.
        #[arg(long, short)]
        output: Option<PathBuf>,
        /// Recorded verbatim in the document metadata.
        #[arg(long)]
        timestamp: Option<String>,
    },
    /// Evaluate a metric over a parameter grid.
    Sweep {
        #[arg(value_enum)]
        kind: SweepChoice,
        #[command(flatten)]
        data: DataArgs,
        /// `start:stop:step` or a comma-separated list.
        #[arg(long)]
        grid: Option<String>,
        #[command(flatten)]
        surface: SurfaceFlags,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Test invariance properties on random binary confusion matrices.
    Check {
        /// `prevalence` or `prioritized:<p_neg>,<p_pos>`; repeatable.
        #[arg(long = "metric")]
        metrics: Vec<String>,
        /// e.g. `class-swap`, `add-tn:10`, `column-scale:2,1`; repeatable.
        #[arg(long = "transform")]
        transforms: Vec<String>,
        #[arg(long, default_value_t = pipeline::DEFAULT_CHECK_TRIALS)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Metrics, elicitation evidence and sweeps in one report.
    Report {
        #[command(flatten)]
        data: DataArgs,
        #[command(flatten)]
        params: ParamFlags,
        /// Rater annotations; elicited values fill unset parameters.
        #[arg(long)]
        annotations: Option<PathBuf>,
        /// Gold labels for --annotations.
        #[arg(long)]
        gold: Option<PathBuf>,
        /// Use only this decision's annotations.
        #[arg(long)]
        decision: Option<String>,
        /// See `elicit --confidence-fraction`.
        #[arg(long, default_value_t = pipeline::DEFAULT_CONFIDENCE_FRACTION)]
        confidence_fraction: f64,
        #[command(flatten)]
        surface: SurfaceFlags,
        #[command(flatten)]
        out: OutputArgs,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum SweepChoice {
    Tau,
    Priority,
    Surface,
    Nbha,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Tsv,
}

#[derive(Clone, Copy, ValueEnum)]
enum PenaltyChoice {
    Standard,
    Risk,
}

#[derive(Args)]
struct DataArgs {
    /// Predictions CSV: instance_id,true_label,score:<label>,...
    predictions: PathBuf,
    /// Accept score vectors that do not sum to 1.
    #[arg(long)]
    raw_scores: bool,
    /// Positive label of a binary task (default: second score column).
    #[arg(long)]
    positive_label: Option<String>,
}

impl DataArgs {
    fn source(&self) -> DataSource {
        DataSource {
            predictions: self.predictions.clone(),
            mode: if self.raw_scores { NormalizationMode::Raw } else { NormalizationMode::Soft },
            positive_label: self.positive_label.clone(),
        }
    }
}

#[derive(Args)]
struct ParamFlags {
    /// A number, or @file with a `tau` entry.
    #[arg(long)]
    tau: Option<String>,
    /// `label=w,...`, favor-specificity, favor-sensitivity, balanced, or @file.
    #[arg(long)]
    priorities: Option<String>,
    /// `const:<v>` or @file (CSV instance_id,complexity or JSON).
    #[arg(long)]
    complexity: Option<String>,
    #[arg(long, value_enum, default_value = "standard")]
    penalty: PenaltyChoice,
    /// Parameter document supplying unset tau, priorities and complexity.
    #[arg(long)]
    params: Option<PathBuf>,
}

impl ParamFlags {
    fn args(&self) -> ParamArgs {
        ParamArgs {
            tau: self.tau.clone(),
            priorities: self.priorities.clone(),
            complexity: self.complexity.clone(),
            penalty: match self.penalty {
                PenaltyChoice::Standard => PenaltyKind::Standard,
                PenaltyChoice::Risk => PenaltyKind::Risk,
            },
            params_file: self.params.clone(),
        }
    }
}

#[derive(Args)]
struct ElicitFlags {
    /// Annotations CSV, starting with `#scales confidence=<max> complexity=<max>`.
    annotations: PathBuf,
    /// Gold labels: instance_id,label or instance_id,decision,label.
    #[arg(long)]
    gold: Option<PathBuf>,
    /// Use only this decision's annotations; all decisions are pooled otherwise.
    #[arg(long)]
    decision: Option<String>,
    /// Positive gold label (default: last in sorted order).
    #[arg(long)]
    positive_label: Option<String>,
    /// Fraction of correct answers that must lie at or above the tau level.
    #[arg(long, default_value_t = pipeline::DEFAULT_CONFIDENCE_FRACTION)]
    confidence_fraction: f64,
    /// Cases with mean complexity above this get weight 1, others 1/2.
    #[arg(long, default_value_t = DEFAULT_COMPLEXITY_THRESHOLD)]
    complexity_threshold: f64,
    /// Weight 0 instead of 1/2 at or below the threshold.
    #[arg(long)]
    binarize: bool,
    /// Fractions of cases above each reported threshold.
    #[arg(long, value_delimiter = ',', default_values_t = hacc::elicitation::DEFAULT_QUANTILES)]
    quantiles: Vec<f64>,
}

impl ElicitFlags {
    fn args(&self) -> ElicitArgs {
        ElicitArgs {
            annotations: self.annotations.clone(),
            gold: self.gold.clone(),
            decision: self.decision.clone(),
            positive_label: self.positive_label.clone(),
            confidence_fraction: self.confidence_fraction,
            complexity_rule: if self.binarize {
                ComplexityRule::Binarize(self.complexity_threshold)
            } else {
                ComplexityRule::TwoLevel(self.complexity_threshold)
            },
            quantiles: self.quantiles.clone(),
        }
    }
}

#[derive(Args)]
struct SurfaceFlags {
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Random complexity assignments per surface point.
    #[arg(long, default_value_t = 100)]
    samples: usize,
    /// Grid of complex-case proportions.
    #[arg(long)]
    proportions: Option<String>,
    /// Grid of positive-class priorities.
    #[arg(long)]
    priority_grid: Option<String>,
    /// Evaluate the surface on one thread; results are identical.
    #[arg(long)]
    serial: bool,
}

impl SurfaceFlags {
    fn config(&self) -> hacc::Result<SurfaceConfig> {
        let mut c = SurfaceConfig {
            samples_per_point: self.samples,
            seed: self.seed,
            execution: pipeline::execution(self.serial),
            ..Default::default()
        };
        if let Some(g) = &self.proportions {
            c.proportions = pipeline::parse_grid(g)?;
        }
        if let Some(g) = &self.priority_grid {
            c.priorities = pipeline::parse_grid(g)?;
        }
        Ok(c)
    }
}

#[derive(Args)]
struct OutputArgs {
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
    /// Write here instead of stdout.
    #[arg(long, short)]
    output: Option<PathBuf>,
    /// Recorded verbatim in the report metadata.
    #[arg(long)]
    timestamp: Option<String>,
}

impl OutputArgs {
    fn render(&self, report: &Report) -> String {
        match self.format {
            Format::Json => report.render_json(),
            Format::Tsv => report.render_tsv(),
        }
    }
}

enum Failure {
    Engine(hacc::Error),
    Write(PathBuf, std::io::Error),
}

impl From<hacc::Error> for Failure {
    fn from(e: hacc::Error) -> Self {
        Failure::Engine(e)
    }
}

fn emit(text: &str, output: Option<&PathBuf>) -> Result<(), Failure> {
    match output {
        Some(path) => std::fs::write(path, text).map_err(|e| Failure::Write(path.clone(), e)),
        None => std::io::stdout()
            .lock()
            .write_all(text.as_bytes())
            .map_err(|e| Failure::Write(PathBuf::from("<stdout>"), e)),
    }
}

fn run(command: Command) -> Result<(), Failure> {
    match command {
        Command::Compute { data, params, out } => {
            let report = pipeline::compute(&data.source(), &params.args(), out.timestamp.clone())?;
            emit(&out.render(&report), out.output.as_ref())
        }
        Command::Elicit { elicit, predictions, output, timestamp } => {
            let source = predictions.map(DataSource::new);
            let doc = pipeline::elicit(&elicit.args(), source.as_ref(), timestamp)?;
            emit(&render_json(&doc), output.as_ref())
        }
        Command::Sweep { kind, data, grid, surface, out } => {
            let args = SweepArgs {
                kind: match kind {
                    SweepChoice::Tau => SweepKind::Tau,
                    SweepChoice::Priority => SweepKind::Priority,
                    SweepChoice::Surface => SweepKind::Surface,
                    SweepChoice::Nbha => SweepKind::NbHa,
                },
                grid: grid.as_deref().map(pipeline::parse_grid).transpose()?,
                surface: surface.config()?,
            };
            let report = pipeline::sweep(&data.source(), &args, out.timestamp.clone())?;
            emit(&out.render(&report), out.output.as_ref())
        }
        Command::Check { metrics, transforms, trials, seed, out } => {
            let mut args = CheckArgs { trials, seed, ..Default::default() };
            if !metrics.is_empty() {
                args.metrics = metrics.iter().map(|m| m.parse::<CmMetric>()).collect::<hacc::Result<_>>()?;
            }
            if !transforms.is_empty() {
                args.transforms = transforms.iter().map(|t| t.parse::<CmTransform>()).collect::<hacc::Result<_>>()?;
            }
            let report = pipeline::check(&args, out.timestamp.clone())?;
            emit(&out.render(&report), out.output.as_ref())
        }
        Command::Report { data, params, annotations, gold, decision, confidence_fraction, surface, out } => {
            let elicit = annotations.map(|path| ElicitArgs {
                gold,
                decision,
                positive_label: data.positive_label.clone(),
                confidence_fraction,
                ..ElicitArgs::new(path)
            });
            let args = ReportArgs { params: params.args(), elicit, surface: surface.config()? };
            let report = pipeline::full_report(&data.source(), &args, out.timestamp.clone())?;
            emit(&out.render(&report), out.output.as_ref())
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(EXIT_PARAMETER);
        }
    };
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Engine(e)) => {
            eprintln!("hacc: {e}");
            ExitCode::from(match e.category() {
                ErrorCategory::Validation => EXIT_VALIDATION,
                ErrorCategory::Parameter => EXIT_PARAMETER,
                ErrorCategory::Io => EXIT_IO,
            })
        }
        Err(Failure::Write(path, e)) => {
            eprintln!("hacc: {}: {e}", path.display());
            ExitCode::from(EXIT_IO)
        }
    }
}
