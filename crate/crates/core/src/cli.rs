//! Command-line front end.
//!
//! Exit codes: 0 success, 2 input error (unreadable file, parse error,
//! misaligned predictions, bad flags), 3 runs that cannot be aggregated.

use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use thiserror::Error;

use crate::aggregate::{aggregate_runs, AggregateError, RunSet, StdKind};
use crate::conll::{parse_conll, ColumnConfig, ColumnIndex, Corpus, ParseError, SchemeChoice, TagScheme};
use crate::report::{render_aggregate, render_classification, render_composition, render_score, Format, Sources};
use crate::scoring::{aligned_predictions, MetricReport, PredColumn, ScoringError};
use crate::taxonomy::{composition, SubsetAssignment, TrainIndex};

#[derive(Debug, Parser)]
#[command(name = "tmr", version, about = "Tough-mentions recall for NER: unseen and type-confusable mention subsets")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Percentage of test mentions in each unseen / type-confusable subset.
    Composition(GoldArgs),
    /// Precision/recall/F1 and recall per subset for one or more prediction files.
    Score(ScoreArgs),
    /// List every test mention with its subset labels.
    Classify(GoldArgs),
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum SchemeArg {
    Auto,
    Iob1,
    Iob2,
    Bioes,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum FormatArg {
    Text,
    Tsv,
    Json,
}

#[derive(Debug, Args)]
pub struct CommonArgs {
    /// Training split (gold); its mentions define what counts as seen.
    #[arg(long)]
    pub train: PathBuf,
    /// Also add this development split's mentions to the seen index (non-standard).
    #[arg(long = "include-dev", value_name = "PATH")]
    pub include_dev: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = SchemeArg::Auto)]
    pub scheme: SchemeArg,
    /// Token column (0-based; negative counts from the end).
    #[arg(long = "token-col", value_name = "N", allow_negative_numbers = true)]
    pub token_col: Option<i64>,
    /// Gold tag column (default: last, or second-to-last with --combined).
    #[arg(long = "gold-col", value_name = "N", allow_negative_numbers = true)]
    pub gold_col: Option<i64>,
    /// Line token that starts a new document.
    #[arg(long, value_name = "MARKER", default_value = "-DOCSTART-")]
    pub docstart: String,
    #[arg(long, value_enum, default_value_t = FormatArg::Text)]
    pub format: FormatArg,
}

#[derive(Debug, Args)]
pub struct GoldArgs {
    /// Test split (gold).
    #[arg(long)]
    pub test: PathBuf,
    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Debug, Args)]
pub struct ScoreArgs {
    /// Test split (gold). Not used with --combined.
    #[arg(long, required_unless_present = "combined")]
    pub test: Option<PathBuf>,
    /// Prediction files, one per run.
    #[arg(long, num_args = 1.., required = true, value_name = "PATH")]
    pub pred: Vec<PathBuf>,
    /// Prediction files hold `token ... gold pred` columns (conlleval layout).
    #[arg(long, conflicts_with = "test")]
    pub combined: bool,
    /// Predicted tag column (default: last).
    #[arg(long = "pred-col", value_name = "N", allow_negative_numbers = true)]
    pub pred_col: Option<i64>,
    /// Divide by n instead of n - 1 for the spread across runs.
    #[arg(long = "population-std")]
    pub population_std: bool,
    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("{path}: {source}")]
    Parse { path: String, source: ParseError },
    #[error("{path}: {source}")]
    Alignment { path: String, source: ScoringError },
    #[error("{0}")]
    Runs(#[from] AggregateError),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Runs(_) => 3,
            _ => 2,
        }
    }
}

fn column(n: Option<i64>, default: ColumnIndex) -> ColumnIndex {
    match n {
        None => default,
        Some(n) if n >= 0 => ColumnIndex::At(n as usize),
        Some(n) => ColumnIndex::FromEnd((-n - 1) as usize),
    }
}

impl CommonArgs {
    fn scheme(&self) -> SchemeChoice {
        match self.scheme {
            SchemeArg::Auto => SchemeChoice::Auto,
            SchemeArg::Iob1 => SchemeChoice::Fixed(TagScheme::Iob1),
            SchemeArg::Iob2 => SchemeChoice::Fixed(TagScheme::Iob2),
            SchemeArg::Bioes => SchemeChoice::Fixed(TagScheme::Bioes),
        }
    }

    /// Layout of plain gold files (train, dev, test).
    fn gold_config(&self) -> ColumnConfig {
        ColumnConfig {
            token_col: column(self.token_col, ColumnIndex::At(0)),
            gold_col: column(self.gold_col, ColumnIndex::LAST),
            pred_col: None,
            scheme: self.scheme(),
            docstart_marker: self.docstart.clone(),
        }
    }

    fn format(&self) -> Format {
        match self.format {
            FormatArg::Text => Format::Text,
            FormatArg::Tsv => Format::Tsv,
            FormatArg::Json => Format::Json,
        }
    }

    fn train_index(&self) -> Result<TrainIndex, CliError> {
        let cfg = self.gold_config();
        let mut idx = TrainIndex::build(&load(&self.train, &cfg)?.gold_mentions());
        if let Some(dev) = &self.include_dev {
            idx.extend(&load(dev, &cfg)?.gold_mentions());
        }
        Ok(idx)
    }

    fn sources(&self, test: Option<&Path>, preds: &[PathBuf]) -> Sources {
        Sources {
            train: Some(self.train.display().to_string()),
            test: test.map(|p| p.display().to_string()),
            dev: self.include_dev.as_ref().map(|p| p.display().to_string()),
            predictions: preds.iter().map(|p| p.display().to_string()).collect(),
        }
    }
}

pub fn load(path: &Path, config: &ColumnConfig) -> Result<Corpus, CliError> {
    let name = path.display().to_string();
    let bytes = std::fs::read(path).map_err(|source| CliError::Io { path: name.clone(), source })?;
    parse_conll(&bytes, config, &name).map_err(|source| CliError::Parse { path: name, source })
}

fn assign(args: &GoldArgs) -> Result<SubsetAssignment, CliError> {
    let idx = args.common.train_index()?;
    let test = load(&args.test, &args.common.gold_config())?;
    Ok(SubsetAssignment::new(test.gold_mentions(), &idx))
}

fn score(args: &ScoreArgs) -> Result<String, CliError> {
    let common = &args.common;
    let idx = common.train_index()?;
    let format = common.format();

    // Each run yields (gold fingerprint, report).
    let run = |path: &PathBuf, gold: Option<&Corpus>| -> Result<(String, MetricReport), CliError> {
        let name = path.display().to_string();
        let (gold_corpus, preds) = match gold {
            Some(gold) => {
                let cfg = ColumnConfig { gold_col: column(args.pred_col, ColumnIndex::LAST), ..common.gold_config() };
                let pred_corpus = load(path, &cfg)?;
                let preds = aligned_predictions(gold, &pred_corpus, PredColumn::Gold)
                    .map_err(|source| CliError::Alignment { path: name, source })?;
                (None, preds)
            }
            None => {
                let cfg = ColumnConfig {
                    gold_col: column(common.gold_col, ColumnIndex::FromEnd(1)),
                    pred_col: Some(column(args.pred_col, ColumnIndex::LAST)),
                    ..common.gold_config()
                };
                let corpus = load(path, &cfg)?;
                let preds = aligned_predictions(&corpus, &corpus, PredColumn::Pred)
                    .map_err(|source| CliError::Alignment { path: name, source })?;
                (Some(corpus), preds)
            }
        };
        let gold = gold_corpus.as_ref().or(gold).expect("gold corpus");
        let assignment = SubsetAssignment::new(gold.gold_mentions(), &idx);
        Ok((gold.gold_fingerprint(), MetricReport::evaluate(&assignment, &preds)))
    };

    let test = match (&args.test, args.combined) {
        (Some(path), false) => Some(load(path, &common.gold_config())?),
        _ => None,
    };
    let results: Vec<Result<(String, MetricReport), CliError>> = std::thread::scope(|s| {
        let handles: Vec<_> = args.pred.iter().map(|p| s.spawn(|| run(p, test.as_ref()))).collect();
        handles.into_iter().map(|h| h.join().expect("scoring thread panicked")).collect()
    });
    let runs = results.into_iter().collect::<Result<Vec<_>, _>>()?;

    let sources = common.sources(args.test.as_deref(), &args.pred);
    if runs.len() == 1 {
        return Ok(render_score(&runs[0].1, &sources, format));
    }
    let kind = if args.population_std { StdKind::Population } else { StdKind::Sample };
    let set = RunSet::new(runs)?;
    Ok(render_aggregate(&aggregate_runs(&set, kind), &sources, format))
}

/// Runs a parsed command and returns what it prints on standard output.
pub fn run(cli: &Cli) -> Result<String, CliError> {
    match &cli.command {
        Command::Composition(args) => {
            let table = composition(&assign(args)?);
            Ok(render_composition(&table, &args.common.sources(Some(&args.test), &[]), args.common.format()))
        }
        Command::Classify(args) => {
            let assignment = assign(args)?;
            Ok(render_classification(&assignment, &args.common.sources(Some(&args.test), &[]), args.common.format()))
        }
        Command::Score(args) => score(args),
    }
}
