//! Mean and standard deviation of scores across prediction runs.
//!
//! Runs are aggregated on their unrounded percentages. The standard
//! deviation defaults to the sample estimate (n - 1 denominator) since runs
//! are a sample of training seeds; `StdKind::Population` divides by n.

use thiserror::Error;

use crate::conll::EntityType;
use crate::scoring::MetricReport;
use crate::taxonomy::Subset;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AggregateError {
    #[error("no runs to aggregate")]
    NoRuns,
    #[error("run {run} was scored against different gold data ({reason})")]
    InconsistentRuns { run: usize, reason: String },
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub enum StdKind {
    #[default]
    Sample,
    Population,
}

/// Reports from several runs over one gold corpus.
#[derive(Debug, Clone)]
pub struct RunSet {
    gold_fingerprint: String,
    reports: Vec<MetricReport>,
}

impl RunSet {
    /// Checks that every run shares the gold fingerprint and subset sizes
    /// of the first.
    pub fn new(runs: Vec<(String, MetricReport)>) -> Result<Self, AggregateError> {
        let mut runs = runs.into_iter();
        let (gold_fingerprint, first) = runs.next().ok_or(AggregateError::NoRuns)?;
        let sizes = first.subset_sizes();
        let types: Vec<&EntityType> = first.per_type.iter().map(|(t, _)| t).collect();
        let mut reports = vec![first.clone()];
        for (i, (fp, report)) in runs.enumerate() {
            let run = i + 2;
            if fp != gold_fingerprint {
                return Err(AggregateError::InconsistentRuns { run, reason: "gold fingerprint differs".into() });
            }
            let same_types = report.per_type.iter().map(|(t, _)| t).eq(types.iter().copied());
            if !same_types || report.subset_sizes() != sizes {
                return Err(AggregateError::InconsistentRuns { run, reason: "subset sizes differ".into() });
            }
            reports.push(report);
        }
        Ok(RunSet { gold_fingerprint, reports })
    }

    pub fn gold_fingerprint(&self) -> &str {
        &self.gold_fingerprint
    }

    pub fn reports(&self) -> &[MetricReport] {
        &self.reports
    }
}

/// Mean and spread of one metric. `None` means undefined in some run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Cell {
    pub mean: Option<f64>,
    pub std: Option<f64>,
    pub n: usize,
}

impl Cell {
    /// `values` are the per-run values; any `None` makes the cell
    /// undefined.
    pub fn from_runs(values: &[Option<f64>], kind: StdKind) -> Cell {
        let n = values.len();
        let defined: Option<Vec<f64>> = values.iter().copied().collect();
        match defined {
            Some(v) if !v.is_empty() => {
                let (mean, std) = mean_std(&v, kind);
                Cell { mean: Some(mean), std: Some(std), n }
            }
            _ => Cell { mean: None, std: None, n },
        }
    }
}

/// Arithmetic mean and standard deviation. Identical values give exactly
/// that value and 0; a single value has std 0 under either kind.
pub fn mean_std(values: &[f64], kind: StdKind) -> (f64, f64) {
    assert!(!values.is_empty(), "mean of no values");
    if values.iter().all(|&x| x == values[0]) {
        return (values[0], 0.0);
    }
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let ss: f64 = values.iter().map(|x| (x - mean).powi(2)).sum();
    let denom = match kind {
        StdKind::Sample => n - 1.0,
        StdKind::Population => n,
    };
    (mean, (ss / denom).sqrt())
}

#[derive(Debug, Clone, PartialEq)]
pub struct PrfCells {
    pub precision: Cell,
    pub recall: Cell,
    pub f1: Cell,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SubsetCell {
    pub subset: Subset,
    pub size: u64,
    pub recall: Cell,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AggregateReport {
    pub n: usize,
    pub std_kind: StdKind,
    pub overall: PrfCells,
    pub per_type: Vec<(EntityType, PrfCells)>,
    pub subsets_overall: Vec<SubsetCell>,
    pub subsets_per_type: Vec<(EntityType, Vec<SubsetCell>)>,
}

fn prf_cells(runs: &[&crate::scoring::Counts], kind: StdKind) -> PrfCells {
    let col = |k: usize| -> Vec<Option<f64>> { runs.iter().map(|c| Some(c.prf_percent()[k])).collect() };
    PrfCells {
        precision: Cell::from_runs(&col(0), kind),
        recall: Cell::from_runs(&col(1), kind),
        f1: Cell::from_runs(&col(2), kind),
    }
}

fn subset_cells(rows: &[&Vec<crate::scoring::SubsetRecall>], kind: StdKind) -> Vec<SubsetCell> {
    (0..rows[0].len())
        .map(|i| {
            let values: Vec<Option<f64>> = rows.iter().map(|r| r[i].recall().and_then(|x| x.percent())).collect();
            SubsetCell { subset: rows[0][i].subset, size: rows[0][i].size, recall: Cell::from_runs(&values, kind) }
        })
        .collect()
}

pub fn aggregate_runs(runs: &RunSet, kind: StdKind) -> AggregateReport {
    let reports = runs.reports();
    let overall = prf_cells(&reports.iter().map(|r| &r.overall).collect::<Vec<_>>(), kind);
    let per_type = reports[0]
        .per_type
        .iter()
        .enumerate()
        .map(|(i, (t, _))| (t.clone(), prf_cells(&reports.iter().map(|r| &r.per_type[i].1).collect::<Vec<_>>(), kind)))
        .collect();
    let subsets_overall = subset_cells(&reports.iter().map(|r| &r.subsets.overall).collect::<Vec<_>>(), kind);
    let subsets_per_type = reports[0]
        .subsets
        .per_type
        .iter()
        .enumerate()
        .map(|(i, (t, _))| {
            (t.clone(), subset_cells(&reports.iter().map(|r| &r.subsets.per_type[i].1).collect::<Vec<_>>(), kind))
        })
        .collect();
    AggregateReport { n: reports.len(), std_kind: kind, overall, per_type, subsets_overall, subsets_per_type }
}
