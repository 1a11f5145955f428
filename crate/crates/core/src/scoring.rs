//! Exact-match scoring: conlleval-compatible precision/recall/F1 and
//! recall over each mention subset.

use std::collections::{BTreeMap, HashSet};

use serde::Serialize;
use thiserror::Error;

use crate::conll::{decode_tags, Corpus, EntityType, Mention};
use crate::ratio::Ratio;
use crate::taxonomy::{type_order, Subset, SubsetAssignment, SubsetLabel};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ScoringError {
    #[error("predictions do not align with the gold file: {0}")]
    SegmentationMismatch(String),
    #[error("subset assignment does not cover the scored gold mentions")]
    AssignmentMismatch,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct Counts {
    pub true_positives: u64,
    pub false_positives: u64,
    pub false_negatives: u64,
}

impl Counts {
    pub fn gold(&self) -> u64 {
        self.true_positives + self.false_negatives
    }

    pub fn predicted(&self) -> u64 {
        self.true_positives + self.false_positives
    }

    pub fn precision(&self) -> Ratio {
        Ratio::new(self.true_positives, self.predicted())
    }

    pub fn recall(&self) -> Ratio {
        Ratio::new(self.true_positives, self.gold())
    }

    /// `2PR / (P + R)` reduced over the counts: `2TP / (2TP + FP + FN)`.
    pub fn f1(&self) -> Ratio {
        Ratio::new(2 * self.true_positives, 2 * self.true_positives + self.false_positives + self.false_negatives)
    }

    /// Percentages with a zero denominator scored as 0, as conlleval does.
    pub fn prf_percent(&self) -> [f64; 3] {
        [self.precision(), self.recall(), self.f1()].map(|r| r.percent().unwrap_or(0.0))
    }
}

/// Which gold mentions were predicted exactly, with TP/FP/FN counts.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MatchResult {
    pub gold: Vec<Mention>,
    pub recalled: Vec<bool>,
    pub overall: Counts,
    /// Every type seen in gold or predictions.
    pub per_type: BTreeMap<EntityType, Counts>,
}

/// Matches predictions to gold by identical `(doc, sent, start, end, type)`.
pub fn match_mentions(gold: &[Mention], pred: &[Mention]) -> MatchResult {
    let pred_set: HashSet<_> = pred.iter().map(Mention::location).collect();
    let gold_set: HashSet<_> = gold.iter().map(Mention::location).collect();

    let mut overall = Counts::default();
    let mut per_type: BTreeMap<EntityType, Counts> = BTreeMap::new();
    let mut recalled = Vec::with_capacity(gold.len());
    for m in gold {
        let hit = pred_set.contains(&m.location());
        recalled.push(hit);
        let c = per_type.entry(m.etype.clone()).or_default();
        if hit {
            c.true_positives += 1;
            overall.true_positives += 1;
        } else {
            c.false_negatives += 1;
            overall.false_negatives += 1;
        }
    }
    for p in pred.iter().filter(|p| !gold_set.contains(&p.location())) {
        per_type.entry(p.etype.clone()).or_default().false_positives += 1;
        overall.false_positives += 1;
    }
    MatchResult { gold: gold.to_vec(), recalled, overall, per_type }
}

/// Recall over one subset. The recall is undefined for an empty subset.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SubsetRecall {
    pub subset: Subset,
    pub recalled: u64,
    pub size: u64,
}

impl SubsetRecall {
    pub fn recall(&self) -> Option<Ratio> {
        (self.size > 0).then(|| Ratio::new(self.recalled, self.size))
    }
}

/// Subset recalls over all mentions and per gold type.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubsetRecallTable {
    /// One entry per `Subset::ALL`, in that order.
    pub overall: Vec<SubsetRecall>,
    /// Gold types by descending mention count, then name.
    pub per_type: Vec<(EntityType, Vec<SubsetRecall>)>,
}

fn recall_row<'a, I>(entries: I) -> Vec<SubsetRecall>
where
    I: Iterator<Item = (&'a Mention, SubsetLabel, bool)> + Clone,
{
    Subset::ALL
        .iter()
        .map(|&subset| {
            let members = entries.clone().filter(|&(_, label, _)| subset.contains(label));
            let (recalled, size) = members.fold((0, 0), |(r, n), (_, _, hit)| (r + u64::from(hit), n + 1));
            SubsetRecall { subset, recalled, size }
        })
        .collect()
}

/// Recall over every subset, overall and restricted to each gold type.
pub fn tmr_recall(result: &MatchResult, assignment: &SubsetAssignment) -> Result<SubsetRecallTable, ScoringError> {
    if result.gold.as_slice() != assignment.mentions() {
        return Err(ScoringError::AssignmentMismatch);
    }
    let entries = || assignment.iter().zip(&result.recalled).map(|((m, l), &hit)| (m, l, hit));
    let overall = recall_row(entries());
    let per_type = type_order(assignment)
        .into_iter()
        .map(|t| {
            let row = recall_row(entries().filter(|(m, _, _)| m.etype == t));
            (t, row)
        })
        .collect();
    Ok(SubsetRecallTable { overall, per_type })
}

/// One run's scores: overall and per-type P/R/F1 plus subset recalls.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MetricReport {
    pub overall: Counts,
    /// Gold types only, ordered like the composition table. Predictions
    /// of other types still count as false positives in `overall`.
    pub per_type: Vec<(EntityType, Counts)>,
    /// False positives of types that never occur in the gold.
    pub predicted_only: Vec<(EntityType, u64)>,
    pub subsets: SubsetRecallTable,
}

impl MetricReport {
    pub fn from_match(result: &MatchResult, assignment: &SubsetAssignment) -> Result<Self, ScoringError> {
        let subsets = tmr_recall(result, assignment)?;
        let per_type = subsets
            .per_type
            .iter()
            .map(|(t, _)| (t.clone(), result.per_type.get(t).copied().unwrap_or_default()))
            .collect();
        let predicted_only = result
            .per_type
            .iter()
            .filter(|(_, c)| c.gold() == 0)
            .map(|(t, c)| (t.clone(), c.false_positives))
            .collect();
        Ok(MetricReport { overall: result.overall, per_type, predicted_only, subsets })
    }

    /// Scores `pred` against the gold mentions held by `assignment`.
    pub fn evaluate(assignment: &SubsetAssignment, pred: &[Mention]) -> Self {
        let result = match_mentions(assignment.mentions(), pred);
        Self::from_match(&result, assignment).expect("match built from the assignment's own mentions")
    }

    pub fn subset_sizes(&self) -> Vec<u64> {
        std::iter::once(&self.subsets.overall)
            .chain(self.subsets.per_type.iter().map(|(_, row)| row))
            .flat_map(|row| row.iter().map(|s| s.size))
            .collect()
    }
}

/// Which tag column of a prediction corpus holds the predictions.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PredColumn {
    /// A separate prediction file parsed with its tag column as "gold".
    Gold,
    /// A combined file's prediction column.
    Pred,
}

/// Decodes predicted mentions, located by the gold corpus's document and
/// sentence indices.
///
/// The two corpora must have the same sentences in the same order with
/// the same tokens. Document markers may differ: sentences are aligned in
/// file order.
pub fn aligned_predictions(gold: &Corpus, predictions: &Corpus, column: PredColumn) -> Result<Vec<Mention>, ScoringError> {
    let gold_sents: Vec<_> = gold.sentences().collect();
    let pred_sents: Vec<_> = predictions.sentences().map(|(_, _, s)| s).collect();
    if gold_sents.len() != pred_sents.len() {
        return Err(ScoringError::SegmentationMismatch(format!(
            "{} has {} sentences, {} has {}",
            gold.source_name,
            gold_sents.len(),
            predictions.source_name,
            pred_sents.len()
        )));
    }
    let mut out = Vec::new();
    for (n, ((doc, sent, g), p)) in gold_sents.into_iter().zip(pred_sents).enumerate() {
        if g.len() != p.len() {
            return Err(ScoringError::SegmentationMismatch(format!(
                "sentence {} has {} tokens in {} but {} in {}",
                n + 1,
                g.len(),
                gold.source_name,
                p.len(),
                predictions.source_name
            )));
        }
        if let Some(i) = (0..g.len()).find(|&i| g.tokens[i].text != p.tokens[i].text) {
            return Err(ScoringError::SegmentationMismatch(format!(
                "sentence {} token {}: {:?} in {} but {:?} in {}",
                n + 1,
                i + 1,
                g.tokens[i].text,
                gold.source_name,
                p.tokens[i].text,
                predictions.source_name
            )));
        }
        let tags = match column {
            PredColumn::Gold => &p.gold_tags,
            PredColumn::Pred => p.pred_tags.as_ref().ok_or_else(|| {
                ScoringError::SegmentationMismatch(format!("{} has no prediction column", predictions.source_name))
            })?,
        };
        out.extend(decode_tags(tags, &g.texts(), doc, sent));
    }
    Ok(out)
}
