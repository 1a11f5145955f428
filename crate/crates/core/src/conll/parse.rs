use std::fmt::Write as _;

use thiserror::Error;

use super::tags::{detect_scheme, TagLabel, TagScheme};
use super::{Corpus, Sentence, Token};

/// A column position, counted from the left or from the right of a line.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ColumnIndex {
    At(usize),
    /// `FromEnd(0)` is the last column.
    FromEnd(usize),
}

impl ColumnIndex {
    pub const LAST: ColumnIndex = ColumnIndex::FromEnd(0);

    fn resolve(self, width: usize) -> Option<usize> {
        match self {
            ColumnIndex::At(i) if i < width => Some(i),
            ColumnIndex::FromEnd(k) if k < width => Some(width - 1 - k),
            _ => None,
        }
    }

    fn min_width(self) -> usize {
        match self {
            ColumnIndex::At(i) => i + 1,
            ColumnIndex::FromEnd(k) => k + 1,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SchemeChoice {
    Auto,
    Fixed(TagScheme),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ColumnConfig {
    pub token_col: ColumnIndex,
    pub gold_col: ColumnIndex,
    pub pred_col: Option<ColumnIndex>,
    pub scheme: SchemeChoice,
    pub docstart_marker: String,
}

impl ColumnConfig {
    /// Token in the first column, gold tag in the last.
    pub fn gold_only() -> Self {
        ColumnConfig {
            token_col: ColumnIndex::At(0),
            gold_col: ColumnIndex::LAST,
            pred_col: None,
            scheme: SchemeChoice::Auto,
            docstart_marker: "-DOCSTART-".to_string(),
        }
    }

    /// conlleval layout: `token ... gold pred`.
    pub fn combined() -> Self {
        ColumnConfig {
            gold_col: ColumnIndex::FromEnd(1),
            pred_col: Some(ColumnIndex::LAST),
            ..ColumnConfig::gold_only()
        }
    }
}

impl Default for ColumnConfig {
    fn default() -> Self {
        ColumnConfig::gold_only()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("line {line}: input is not valid UTF-8")]
    InvalidUtf8 { line: usize },
    #[error("line {line}: {found} column(s), need at least {needed} distinct token/tag columns")]
    MalformedLine { line: usize, found: usize, needed: usize },
    #[error("line {line}: unrecognised tag {tag:?} (expected O, B-X, I-X, E-X or S-X)")]
    UnknownTag { line: usize, tag: String },
    #[error("line {line}: tag {tag:?} is not allowed in {scheme} files")]
    TagNotInScheme { line: usize, tag: String, scheme: TagScheme },
}

impl ParseError {
    pub fn line(&self) -> usize {
        match *self {
            ParseError::InvalidUtf8 { line }
            | ParseError::MalformedLine { line, .. }
            | ParseError::UnknownTag { line, .. }
            | ParseError::TagNotInScheme { line, .. } => line,
        }
    }
}

struct SentenceBuilder {
    sentence: Sentence,
    // Line number of each tag, for scheme errors reported after the fact.
    lines: Vec<usize>,
}

/// Parses a CoNLL column file.
///
/// Blank lines separate sentences (runs of them collapse). A line whose
/// token column equals `config.docstart_marker` opens a new document and
/// is dropped; documents are only created once they receive a sentence, so
/// a file without markers holds at most one document. Fields split on any
/// run of whitespace, and CRLF line endings are accepted.
///
/// With `SchemeChoice::Auto` the scheme is detected from all tag columns;
/// a file with no entity tags at all is labelled IOB2, which has no effect
/// on decoding. With a fixed IOB scheme, `E-`/`S-` tags are rejected.
pub fn parse_conll(input: &[u8], config: &ColumnConfig, source_name: &str) -> Result<Corpus, ParseError> {
    let text = std::str::from_utf8(input).map_err(|e| ParseError::InvalidUtf8 {
        line: 1 + input[..e.valid_up_to()].iter().filter(|&&b| b == b'\n').count(),
    })?;

    let needed = [Some(config.token_col), Some(config.gold_col), config.pred_col]
        .into_iter()
        .flatten()
        .map(ColumnIndex::min_width)
        .max()
        .unwrap_or(1);

    let mut documents: Vec<Vec<Sentence>> = Vec::new();
    let mut line_numbers: Vec<Vec<Vec<usize>>> = Vec::new();
    let mut new_document = true;
    let mut current: Option<SentenceBuilder> = None;

    let mut flush = |current: &mut Option<SentenceBuilder>, new_document: &mut bool| {
        if let Some(b) = current.take() {
            if *new_document || documents.is_empty() {
                documents.push(Vec::new());
                line_numbers.push(Vec::new());
                *new_document = false;
            }
            documents.last_mut().unwrap().push(b.sentence);
            line_numbers.last_mut().unwrap().push(b.lines);
        }
    };

    for (i, raw) in text.split('\n').enumerate() {
        let line = i + 1;
        let fields: Vec<&str> = raw.split_whitespace().collect();
        if fields.is_empty() {
            flush(&mut current, &mut new_document);
            continue;
        }
        let malformed = || ParseError::MalformedLine { line, found: fields.len(), needed };
        let token_at = config.token_col.resolve(fields.len()).ok_or_else(malformed)?;
        if fields[token_at] == config.docstart_marker {
            flush(&mut current, &mut new_document);
            new_document = true;
            continue;
        }
        let gold_at = config.gold_col.resolve(fields.len()).ok_or_else(malformed)?;
        let pred_at = match config.pred_col {
            Some(c) => Some(c.resolve(fields.len()).ok_or_else(malformed)?),
            None => None,
        };
        let distinct = token_at != gold_at && pred_at.is_none_or(|p| p != token_at && p != gold_at);
        if !distinct {
            return Err(malformed());
        }

        let tag = |at: usize| {
            fields[at].parse::<TagLabel>().map_err(|_| ParseError::UnknownTag { line, tag: fields[at].to_string() })
        };
        let gold = tag(gold_at)?;
        let pred = pred_at.map(tag).transpose()?;
        let extras = fields
            .iter()
            .enumerate()
            .filter(|&(j, _)| j != token_at && j != gold_at && Some(j) != pred_at)
            .map(|(_, f)| f.to_string())
            .collect();

        let b = current.get_or_insert_with(|| SentenceBuilder {
            sentence: Sentence {
                tokens: Vec::new(),
                gold_tags: Vec::new(),
                pred_tags: pred_at.map(|_| Vec::new()),
            },
            lines: Vec::new(),
        });
        b.sentence.tokens.push(Token { text: fields[token_at].to_string(), column_extras: extras });
        b.sentence.gold_tags.push(gold);
        if let (Some(preds), Some(p)) = (b.sentence.pred_tags.as_mut(), pred) {
            preds.push(p);
        }
        b.lines.push(line);
    }
    flush(&mut current, &mut new_document);

    let scheme = match config.scheme {
        SchemeChoice::Fixed(scheme) => {
            for (doc, doc_lines) in documents.iter().zip(&line_numbers) {
                for (sent, lines) in doc.iter().zip(doc_lines) {
                    let columns = std::iter::once(&sent.gold_tags).chain(sent.pred_tags.as_ref());
                    for tags in columns {
                        if let Some((tag, &line)) = tags.iter().zip(lines).find(|(t, _)| !scheme.permits(t.flag())) {
                            return Err(ParseError::TagNotInScheme { line, tag: tag.to_string(), scheme });
                        }
                    }
                }
            }
            scheme
        }
        SchemeChoice::Auto => {
            let columns = documents
                .iter()
                .flatten()
                .flat_map(|s| std::iter::once(s.gold_tags.as_slice()).chain(s.pred_tags.as_deref()));
            detect_scheme(columns).unwrap_or(TagScheme::Iob2)
        }
    };

    Ok(Corpus { documents, scheme, source_name: source_name.to_string() })
}

/// Serializes a corpus as single-space-separated columns: token, extra
/// columns, gold tag, and predicted tag when present. Every document is
/// introduced by a `-DOCSTART-` line so that re-parsing reproduces the
/// document structure.
pub fn write_conll(corpus: &Corpus) -> String {
    let mut out = String::new();
    for doc in &corpus.documents {
        let width = doc.first().and_then(|s| s.tokens.first()).map_or(0, |t| t.column_extras.len());
        let has_pred = doc.first().is_some_and(|s| s.pred_tags.is_some());
        out.push_str("-DOCSTART-");
        for _ in 0..width {
            out.push_str(" -X-");
        }
        out.push_str(if has_pred { " O O\n\n" } else { " O\n\n" });
        for sent in doc {
            for (i, tok) in sent.tokens.iter().enumerate() {
                out.push_str(&tok.text);
                for extra in &tok.column_extras {
                    out.push(' ');
                    out.push_str(extra);
                }
                let _ = write!(out, " {}", sent.gold_tags[i]);
                if let Some(pred) = &sent.pred_tags {
                    let _ = write!(out, " {}", pred[i]);
                }
                out.push('\n');
            }
            out.push('\n');
        }
    }
    out
}
