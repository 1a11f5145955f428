//! Rendering of composition tables, score reports and classification
//! listings as aligned text, TSV, or a JSON document.
//!
//! All three renderings of a report are produced from the same rounded
//! cell strings. Undefined values (empty subsets, or a zero-mention test
//! set in a composition table) render as "—" in text and TSV and as
//! `null` in JSON.

use serde::Serialize;
use serde_json::{json, Value};

use crate::aggregate::{AggregateReport, Cell, StdKind};
use crate::conll::Mention;
use crate::ratio::{format_half_up, with_thousands, Ratio};
use crate::scoring::{Counts, MetricReport, SubsetRecall};
use crate::taxonomy::{CompositionTable, Subset, SubsetAssignment, SubsetCounts, SubsetLabel};

/// Identifier of the JSON layout; bumped on incompatible changes.
pub const SCHEMA_ID: &str = "tmr-report/1";

/// Placeholder for an undefined value.
pub const UNDEFINED: &str = "—";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Text,
    Tsv,
    Json,
}

/// Where the data came from; echoed in every rendering.
#[derive(Debug, Clone, Default, Serialize)]
pub struct Sources {
    pub train: Option<String>,
    pub test: Option<String>,
    /// Development data merged into the seen-mention index.
    pub dev: Option<String>,
    pub predictions: Vec<String>,
}

impl Sources {
    fn notes(&self) -> Vec<String> {
        match &self.dev {
            Some(dev) => vec![format!(
                "note: seen-mention index includes development mentions from {dev} (non-standard)"
            )],
            None => Vec::new(),
        }
    }

    fn json(&self) -> Value {
        json!({
            "train": self.train,
            "test": self.test,
            "dev": self.dev,
            "predictions": self.predictions,
            "non_standard_seen_index": self.dev.is_some(),
        })
    }
}

fn pad_table(rows: &[Vec<String>], left_cols: usize) -> String {
    let width = rows.iter().map(Vec::len).max().unwrap_or(0);
    let widths: Vec<usize> = (0..width)
        .map(|c| rows.iter().filter_map(|r| r.get(c)).map(|s| s.chars().count()).max().unwrap_or(0))
        .collect();
    let mut out = String::new();
    for row in rows {
        let mut line = String::new();
        for (c, cell) in row.iter().enumerate() {
            let pad = widths[c] - cell.chars().count();
            if c > 0 {
                line.push_str("  ");
            }
            if c < left_cols {
                line.push_str(cell);
                line.push_str(&" ".repeat(pad));
            } else {
                line.push_str(&" ".repeat(pad));
                line.push_str(cell);
            }
        }
        out.push_str(line.trim_end());
        out.push('\n');
    }
    out
}

fn tsv(rows: &[Vec<String>]) -> String {
    rows.iter().map(|r| r.join("\t") + "\n").collect()
}

fn to_json_string(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("JSON values always serialize");
    s.push('\n');
    s
}

// ---------------------------------------------------------------- composition

fn composition_label(subset: Subset) -> &'static str {
    match subset {
        Subset::UnseenTokens => "Unseen-Tok.",
        other => other.name(),
    }
}

fn percent_1dp(count: usize, total: usize) -> Option<String> {
    Ratio::new(count as u64, total as u64).display_percent(1)
}

pub fn render_composition(table: &CompositionTable, sources: &Sources, format: Format) -> String {
    let columns: Vec<(String, &SubsetCounts)> = table
        .columns
        .iter()
        .map(|(t, c)| (t.to_string(), c))
        .chain(std::iter::once(("ALL".to_string(), &table.all)))
        .collect();

    if format == Format::Json {
        let col_json = |c: &SubsetCounts| {
            let subsets: serde_json::Map<String, Value> = Subset::COMPOSITION
                .iter()
                .map(|&s| {
                    let count = c.get(s);
                    let ratio = Ratio::new(count as u64, c.total as u64);
                    let cell = json!({
                        "count": count,
                        "percent": ratio.percent(),
                        "display": ratio.display_percent(1),
                    });
                    (s.name().to_string(), cell)
                })
                .collect();
            json!({ "total": c.total, "seen": c.seen, "subsets": subsets })
        };
        let types: Vec<Value> = table
            .columns
            .iter()
            .map(|(t, c)| {
                let mut v = col_json(c);
                v["type"] = json!(t.as_str());
                v
            })
            .collect();
        return to_json_string(&json!({
            "schema": SCHEMA_ID,
            "kind": "composition",
            "sources": sources.json(),
            "types": types,
            "all": col_json(&table.all),
        }));
    }

    let text = format == Format::Text;
    let mut rows = vec![std::iter::once("Set".to_string()).chain(columns.iter().map(|(n, _)| n.clone())).collect()];
    for s in Subset::COMPOSITION {
        let mut row = vec![composition_label(s).to_string()];
        row.extend(columns.iter().map(|(_, c)| percent_1dp(c.get(s), c.total).unwrap_or_else(|| UNDEFINED.into())));
        rows.push(row);
    }
    let mut count_row = vec!["All (Count)".to_string()];
    count_row.extend(columns.iter().map(|(_, c)| if text { with_thousands(c.total) } else { c.total.to_string() }));
    rows.push(count_row);

    let notes = sources.notes();
    if text {
        let mut out = pad_table(&rows, 1);
        for n in notes {
            out.push_str(&n);
            out.push('\n');
        }
        out
    } else {
        let mut out: String = notes.iter().map(|n| format!("# {n}\n")).collect();
        out.push_str(&tsv(&rows));
        out
    }
}

// ---------------------------------------------------------------- classify

pub fn render_classification(assignment: &SubsetAssignment, sources: &Sources, format: Format) -> String {
    let entries: Vec<(&Mention, SubsetLabel)> = assignment.sorted();
    match format {
        Format::Json => {
            let mentions: Vec<Value> = entries
                .iter()
                .map(|(m, l)| {
                    json!({
                        "doc": m.doc,
                        "sent": m.sent,
                        "start": m.start,
                        "end": m.end,
                        "tokens": m.tokens,
                        "type": m.etype.as_str(),
                        "unseen_class": l.unseen.name(),
                        "tcm_class": l.tcm.name(),
                    })
                })
                .collect();
            to_json_string(&json!({
                "schema": SCHEMA_ID,
                "kind": "classify",
                "sources": sources.json(),
                "mentions": mentions,
            }))
        }
        Format::Text | Format::Tsv => {
            let header = ["doc", "sent", "start", "end", "type", "unseen_class", "tcm_class", "tokens"];
            let mut rows: Vec<Vec<String>> = vec![header.iter().map(|s| s.to_string()).collect()];
            for (m, l) in &entries {
                rows.push(vec![
                    m.doc.to_string(),
                    m.sent.to_string(),
                    m.start.to_string(),
                    m.end.to_string(),
                    m.etype.to_string(),
                    l.unseen.name().to_string(),
                    l.tcm.name().to_string(),
                    m.tokens.join(" "),
                ]);
            }
            let notes = sources.notes();
            if format == Format::Text {
                let mut out = pad_table(&rows, header.len());
                for n in notes {
                    out.push_str(&n);
                    out.push('\n');
                }
                out
            } else {
                let mut out: String = notes.iter().map(|n| format!("# {n}\n")).collect();
                out.push_str(&tsv(&rows));
                out
            }
        }
    }
}

// ---------------------------------------------------------------- score

/// One rendered number: the rounded value and, for multi-run reports, the
/// rounded standard deviation.
#[derive(Debug, Clone, PartialEq)]
struct ScoreCell {
    value: Option<String>,
    std: Option<String>,
    json: Value,
}

impl ScoreCell {
    fn exact(ratio: Option<Ratio>) -> Self {
        match ratio {
            Some(r) => {
                let display = r.display_percent(2);
                ScoreCell {
                    json: json!({ "percent": r.percent(), "display": display }),
                    value: display,
                    std: None,
                }
            }
            None => ScoreCell { value: None, std: None, json: Value::Null },
        }
    }

    /// P/R/F1 with conlleval's zero-denominator convention.
    fn metric(ratio: Ratio) -> Self {
        ScoreCell::exact(Some(if ratio.den == 0 { Ratio::new(0, 1) } else { ratio }))
    }

    fn aggregate(cell: &Cell) -> Self {
        match (cell.mean, cell.std) {
            (Some(mean), Some(std)) => {
                let value = format_half_up(mean, 2);
                let std_s = format_half_up(std, 2);
                ScoreCell {
                    json: json!({
                        "mean": mean,
                        "std": std,
                        "n": cell.n,
                        "display": format!("{value} (±{std_s})"),
                    }),
                    value: Some(value),
                    std: Some(std_s),
                }
            }
            _ => ScoreCell { value: None, std: None, json: Value::Null },
        }
    }

    fn text(&self) -> String {
        match (&self.value, &self.std) {
            (Some(v), Some(s)) => format!("{v} (±{s})"),
            (Some(v), None) => v.clone(),
            (None, _) => UNDEFINED.to_string(),
        }
    }
}

struct PrfRow {
    scope: String,
    cells: [ScoreCell; 3],
    counts: Option<Counts>,
}

struct SubsetRow {
    subset: Subset,
    size: u64,
    recalled: Option<u64>,
    cell: ScoreCell,
}

struct ScoreView {
    runs: usize,
    std_kind: Option<StdKind>,
    prf: Vec<PrfRow>,
    predicted_only: Vec<(String, u64)>,
    /// `(scope, rows)`; the first scope is ALL.
    subsets: Vec<(String, Vec<SubsetRow>)>,
}

fn prf_row(scope: String, c: &Counts) -> PrfRow {
    PrfRow {
        scope,
        cells: [ScoreCell::metric(c.precision()), ScoreCell::metric(c.recall()), ScoreCell::metric(c.f1())],
        counts: Some(*c),
    }
}

fn subset_rows(row: &[SubsetRecall]) -> Vec<SubsetRow> {
    row.iter()
        .map(|s| SubsetRow { subset: s.subset, size: s.size, recalled: Some(s.recalled), cell: ScoreCell::exact(s.recall()) })
        .collect()
}

impl ScoreView {
    fn single(r: &MetricReport) -> Self {
        let mut prf = vec![prf_row("ALL".into(), &r.overall)];
        prf.extend(r.per_type.iter().map(|(t, c)| prf_row(t.to_string(), c)));
        let mut subsets = vec![("ALL".to_string(), subset_rows(&r.subsets.overall))];
        subsets.extend(r.subsets.per_type.iter().map(|(t, row)| (t.to_string(), subset_rows(row))));
        ScoreView {
            runs: 1,
            std_kind: None,
            prf,
            predicted_only: r.predicted_only.iter().map(|(t, n)| (t.to_string(), *n)).collect(),
            subsets,
        }
    }

    fn aggregate(a: &AggregateReport) -> Self {
        let prf_cells = |scope: String, p: &crate::aggregate::PrfCells| PrfRow {
            scope,
            cells: [ScoreCell::aggregate(&p.precision), ScoreCell::aggregate(&p.recall), ScoreCell::aggregate(&p.f1)],
            counts: None,
        };
        let rows = |cells: &[crate::aggregate::SubsetCell]| -> Vec<SubsetRow> {
            cells
                .iter()
                .map(|c| SubsetRow { subset: c.subset, size: c.size, recalled: None, cell: ScoreCell::aggregate(&c.recall) })
                .collect()
        };
        let mut prf = vec![prf_cells("ALL".into(), &a.overall)];
        prf.extend(a.per_type.iter().map(|(t, p)| prf_cells(t.to_string(), p)));
        let mut subsets = vec![("ALL".to_string(), rows(&a.subsets_overall))];
        subsets.extend(a.subsets_per_type.iter().map(|(t, c)| (t.to_string(), rows(c))));
        ScoreView { runs: a.n, std_kind: Some(a.std_kind), prf, predicted_only: Vec::new(), subsets }
    }

    fn text(&self, sources: &Sources) -> String {
        let mut out = String::new();
        if self.runs > 1 {
            let kind = match self.std_kind {
                Some(StdKind::Population) => "population",
                _ => "sample",
            };
            out.push_str(&format!("{} runs: mean (±{kind} standard deviation)\n\n", self.runs));
        }

        let mut rows = vec![vec!["Type".to_string(), "Precision".into(), "Recall".into(), "F1".into()]];
        if self.runs == 1 {
            rows[0].extend(["Gold".to_string(), "Pred".into(), "Correct".into()]);
        }
        for r in &self.prf {
            let mut row = vec![r.scope.clone()];
            row.extend(r.cells.iter().map(ScoreCell::text));
            if let Some(c) = r.counts {
                row.extend([c.gold(), c.predicted(), c.true_positives].map(|n| n.to_string()));
            }
            rows.push(row);
        }
        out.push_str(&pad_table(&rows, 1));
        for (t, n) in &self.predicted_only {
            out.push_str(&format!("predicted type {t} not in gold: {n} false positive(s)\n"));
        }

        out.push_str("\nRecall by subset [subset size]\n");
        let mut rows = vec![std::iter::once("Subset".to_string()).chain(self.subsets.iter().map(|(s, _)| s.clone())).collect()];
        for (i, subset) in Subset::ALL.iter().enumerate() {
            let mut row = vec![subset.name().to_string()];
            for (_, cells) in &self.subsets {
                let c = &cells[i];
                row.push(format!("{} [{}]", c.cell.text(), c.size));
            }
            rows.push(row);
        }
        out.push_str(&pad_table(&rows, 1));
        for n in sources.notes() {
            out.push_str(&n);
            out.push('\n');
        }
        out
    }

    fn tsv(&self, sources: &Sources) -> String {
        let mut rows = vec![["section", "scope", "metric", "value", "std", "size"].map(String::from).to_vec()];
        let cell = |c: &ScoreCell| (c.value.clone().unwrap_or_else(|| UNDEFINED.into()), c.std.clone().unwrap_or_default());
        for r in &self.prf {
            for (name, c) in ["precision", "recall", "f1"].iter().zip(&r.cells) {
                let (v, s) = cell(c);
                let size = r.counts.map(|c| c.gold().to_string()).unwrap_or_default();
                rows.push(vec!["prf".into(), r.scope.clone(), name.to_string(), v, s, size]);
            }
        }
        for (scope, cells) in &self.subsets {
            for c in cells {
                let (v, s) = cell(&c.cell);
                rows.push(vec!["subset_recall".into(), scope.clone(), c.subset.name().into(), v, s, c.size.to_string()]);
            }
        }
        let mut out: String = sources.notes().iter().map(|n| format!("# {n}\n")).collect();
        out.push_str(&tsv(&rows));
        out
    }

    fn json(&self, sources: &Sources) -> String {
        let prf = |r: &PrfRow| {
            let mut v = json!({
                "precision": r.cells[0].json,
                "recall": r.cells[1].json,
                "f1": r.cells[2].json,
            });
            if let Some(c) = r.counts {
                v["true_positives"] = json!(c.true_positives);
                v["false_positives"] = json!(c.false_positives);
                v["false_negatives"] = json!(c.false_negatives);
            }
            v
        };
        let subsets = |cells: &[SubsetRow]| -> Vec<Value> {
            cells
                .iter()
                .map(|c| {
                    let mut v = json!({ "subset": c.subset.name(), "size": c.size, "recall": c.cell.json });
                    if let Some(r) = c.recalled {
                        v["recalled"] = json!(r);
                    }
                    v
                })
                .collect()
        };
        let per_type: Vec<Value> = self.prf[1..]
            .iter()
            .map(|r| {
                let mut v = prf(r);
                v["type"] = json!(r.scope);
                v
            })
            .collect();
        let subset_types: Vec<Value> = self.subsets[1..]
            .iter()
            .map(|(t, cells)| json!({ "type": t, "subsets": subsets(cells) }))
            .collect();
        let std = match self.std_kind {
            None => Value::Null,
            Some(StdKind::Sample) => json!("sample"),
            Some(StdKind::Population) => json!("population"),
        };
        let predicted_only: Vec<Value> =
            self.predicted_only.iter().map(|(t, n)| json!({ "type": t, "false_positives": n })).collect();
        to_json_string(&json!({
            "schema": SCHEMA_ID,
            "kind": "score",
            "mode": if self.std_kind.is_some() { "aggregate" } else { "single" },
            "runs": self.runs,
            "std": std,
            "sources": sources.json(),
            "overall": prf(&self.prf[0]),
            "per_type": per_type,
            "predicted_only_types": predicted_only,
            "subset_recall": {
                "all": subsets(&self.subsets[0].1),
                "per_type": subset_types,
            },
        }))
    }

    fn render(&self, sources: &Sources, format: Format) -> String {
        match format {
            Format::Text => self.text(sources),
            Format::Tsv => self.tsv(sources),
            Format::Json => self.json(sources),
        }
    }
}

pub fn render_score(report: &MetricReport, sources: &Sources, format: Format) -> String {
    ScoreView::single(report).render(sources, format)
}

pub fn render_aggregate(report: &AggregateReport, sources: &Sources, format: Format) -> String {
    ScoreView::aggregate(report).render(sources, format)
}
