use rand::seq::index;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::dataset::Dataset;
use crate::error::{Error, Result};
use crate::metrics::{
    confident_accuracy, net_benefit_via_ha, prioritized_accuracy, risk_h_accuracy, weighted_h_accuracy,
};
use crate::params::{PenaltySpec, PriorityVector};
use crate::penalty::Penalty;

/// Generator used by every randomized sweep. Grid point `i` draws from
/// stream `i` of a generator seeded with the master seed, so tables do not
/// depend on evaluation order or thread count.
pub const RNG_ALGORITHM: &str = "ChaCha8Rng(seed_from_u64(seed)), stream = grid point index";

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub point: Vec<f64>,
    pub values: Vec<f64>,
}

/// A metric evaluated over a grid of parameter points, sorted by point.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepTable {
    pub name: String,
    pub axis_names: Vec<String>,
    pub columns: Vec<String>,
    pub rows: Vec<SweepRow>,
}

impl SweepTable {
    fn new(name: &str, axes: &[&str], columns: &[&str]) -> Self {
        SweepTable {
            name: name.to_string(),
            axis_names: axes.iter().map(|s| s.to_string()).collect(),
            columns: columns.iter().map(|s| s.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    /// Values of the named column, in row order.
    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let j = self.columns.iter().position(|c| c == name)?;
        Some(self.rows.iter().map(|r| r.values[j]).collect())
    }
}

fn sorted(values: &[f64]) -> Result<Vec<f64>> {
    if let Some(v) = values.iter().find(|v| !v.is_finite()) {
        return Err(Error::InvalidParameter(format!("non-finite grid value {v}")));
    }
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    Ok(v)
}

fn check_unit(name: &str, values: &[f64]) -> Result<()> {
    match values.iter().find(|v| !(0.0..=1.0).contains(*v)) {
        Some(v) => Err(Error::InvalidParameter(format!("{name} value {v} outside [0, 1]"))),
        None => Ok(()),
    }
}

/// Confident accuracy at each tau, ascending in tau.
pub fn tau_sweep(dataset: &Dataset, taus: &[f64]) -> Result<SweepTable> {
    let mut table = SweepTable::new("tau", &["tau"], &["confident_accuracy"]);
    for tau in sorted(taus)? {
        let v = confident_accuracy(dataset, tau)?;
        table.rows.push(SweepRow { point: vec![tau], values: vec![v] });
    }
    Ok(table)
}

/// Prioritized accuracy with priorities `<1 - p1, p1>` for each positive
/// priority `p1`.
pub fn priority_sweep(dataset: &Dataset, positive_priorities: &[f64]) -> Result<SweepTable> {
    let labels = dataset.label_set();
    labels.require_binary()?;
    check_unit("priority", positive_priorities)?;
    let mut table = SweepTable::new("priority", &["priority_positive"], &["prioritized_accuracy"]);
    for p1 in sorted(positive_priorities)? {
        let p = PriorityVector::binary(1.0 - p1, p1, labels)?;
        let v = prioritized_accuracy(dataset, &p)?;
        table.rows.push(SweepRow { point: vec![p1], values: vec![v] });
    }
    Ok(table)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Execution {
    Serial,
    #[default]
    Parallel,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SurfaceConfig {
    /// Fractions of instances marked complex.
    pub proportions: Vec<f64>,
    /// Priorities of the positive class.
    pub priorities: Vec<f64>,
    pub samples_per_point: usize,
    pub seed: u64,
    pub execution: Execution,
}

impl Default for SurfaceConfig {
    fn default() -> Self {
        let grid: Vec<f64> = (0..=10).map(|i| i as f64 / 10.0).collect();
        SurfaceConfig {
            proportions: grid.clone(),
            priorities: grid,
            samples_per_point: 100,
            seed: 0,
            execution: Execution::Parallel,
        }
    }
}

// floor(q * n) without losing an exact product to rounding below it
fn complex_count(q: f64, n: usize) -> usize {
    ((q * n as f64 + 1e-9).floor() as usize).min(n)
}

/// H-accuracy at chance tau over a grid of (proportion of complex cases,
/// positive priority). At each point, `samples_per_point` random subsets of
/// `floor(q n)` instances get complexity 1 and the rest 1/2; the table holds
/// the sample mean, the sample variance and the standard error of the mean.
pub fn complexity_surface(dataset: &Dataset, config: &SurfaceConfig) -> Result<SweepTable> {
    let labels = dataset.label_set();
    labels.require_binary()?;
    check_unit("proportion", &config.proportions)?;
    check_unit("priority", &config.priorities)?;
    if config.samples_per_point == 0 {
        return Err(Error::InvalidParameter("samples per point must be at least 1".into()));
    }
    let proportions = sorted(&config.proportions)?;
    let priorities = sorted(&config.priorities)?;
    let penalty = Penalty::new(PenaltySpec::standard(labels.chance()), 2, labels.positive_index())?;

    let grid: Vec<(usize, f64, f64)> = proportions
        .iter()
        .flat_map(|&q| priorities.iter().map(move |&p1| (q, p1)))
        .enumerate()
        .map(|(i, (q, p1))| (i, q, p1))
        .collect();

    let point = |&(i, q, p1): &(usize, f64, f64)| -> Result<SweepRow> {
        let p = PriorityVector::binary(1.0 - p1, p1, labels)?;
        let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
        rng.set_stream(i as u64);
        let n = dataset.len();
        let m = complex_count(q, n);
        let mut weights = vec![0.5; n];
        let mut samples = Vec::with_capacity(config.samples_per_point);
        for _ in 0..config.samples_per_point {
            weights.fill(0.5);
            for j in index::sample(&mut rng, n, m).into_iter() {
                weights[j] = 1.0;
            }
            samples.push(weighted_h_accuracy(dataset, penalty, p.weights(), &weights)?);
        }
        let (mean, variance) = mean_and_variance(&samples);
        let std_error = (variance / samples.len() as f64).sqrt();
        Ok(SweepRow { point: vec![q, p1], values: vec![mean, variance, std_error] })
    };

    let rows: Vec<SweepRow> = match config.execution {
        Execution::Serial => grid.iter().map(point).collect::<Result<_>>()?,
        Execution::Parallel => grid.par_iter().map(point).collect::<Result<_>>()?,
    };
    let mut table = SweepTable::new(
        "surface",
        &["proportion_complex", "priority_positive"],
        &["mean_h_accuracy", "sample_variance", "standard_error"],
    );
    table.rows = rows;
    Ok(table)
}

/// Sample mean and unbiased sample variance (zero for a single sample).
/// Shifted by the first sample, so identical samples give their common value
/// and zero variance exactly.
fn mean_and_variance(samples: &[f64]) -> (f64, f64) {
    let n = samples.len() as f64;
    let shift = samples[0];
    let offset = samples.iter().map(|x| x - shift).sum::<f64>() / n;
    let mean = shift + offset;
    if samples.len() < 2 {
        return (mean, 0.0);
    }
    let ss: f64 = samples.iter().map(|x| (x - shift - offset).powi(2)).sum();
    (mean, ss / (n - 1.0))
}

/// Net benefit, standardized net benefit, confident accuracy and risk
/// H-accuracy against tau. Below chance level, confident accuracy is
/// evaluated at chance (where it equals balanced accuracy).
pub fn nb_ha_curves(dataset: &Dataset, taus: &[f64]) -> Result<SweepTable> {
    dataset.label_set().require_binary()?;
    let prevalence = dataset.prevalence()?;
    let chance = dataset.label_set().chance();
    let mut table = SweepTable::new(
        "nbha",
        &["tau"],
        &["net_benefit", "standardized_net_benefit", "confident_accuracy", "risk_h_accuracy"],
    );
    for tau in sorted(taus)? {
        let nb = net_benefit_via_ha(dataset, tau)?;
        let confident = confident_accuracy(dataset, tau.max(chance))?;
        let risk = risk_h_accuracy(dataset, tau)?;
        table.rows.push(SweepRow { point: vec![tau], values: vec![nb, nb / prevalence, confident, risk] });
    }
    Ok(table)
}
