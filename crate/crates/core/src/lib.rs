//! Tough-mentions recall (TMR) diagnostics for named entity recognition.
//!
//! Test-set gold mentions are split into subsets by how they relate to the
//! training data (seen, unseen token sequence, unseen type) and by whether
//! their token sequence carries several types in the test set
//! (type-confusable). Predictions are scored with conlleval-compatible
//! exact-match precision/recall/F1 plus recall over each subset.
//!
//! ```
//! use tmr::conll::{parse_conll, ColumnConfig};
//! use tmr::scoring::MetricReport;
//! use tmr::taxonomy::{SubsetAssignment, TrainIndex};
//!
//! let cfg = ColumnConfig::gold_only();
//! let train = parse_conll(b"Newcastle B-LOC\nis O\nin O\nthe O\nUK B-LOC\n", &cfg, "train").unwrap();
//! let test = parse_conll(b"John B-PER\nBrown I-PER\n,\tO\nNewcastle B-ORG\nUK B-LOC\n", &cfg, "test").unwrap();
//!
//! let index = TrainIndex::build(&train.gold_mentions());
//! let assignment = SubsetAssignment::new(test.gold_mentions(), &index);
//! let report = MetricReport::evaluate(&assignment, &test.gold_mentions());
//! assert_eq!(report.overall.recall().display_percent(2).unwrap(), "100.00");
//! ```

pub mod aggregate;
pub mod cli;
pub mod conll;
pub mod ratio;
pub mod report;
pub mod scoring;
pub mod taxonomy;
