//! CoNLL column files: corpus model, parsing, serialization, and tag
//! decoding.

mod parse;
mod tags;

pub use parse::{parse_conll, write_conll, ColumnConfig, ColumnIndex, ParseError, SchemeChoice};
pub use tags::{
    chunk_spans, detect_scheme, encode_tags, EncodeError, EntityType, Flag, NoEntities, Span, TagLabel, TagScheme,
    UnknownTag,
};

use serde::Serialize;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Token {
    /// Surface form exactly as read; never case-folded.
    pub text: String,
    /// Columns other than the surface form and tag columns, verbatim.
    pub column_extras: Vec<String>,
}

impl Token {
    pub fn new(text: impl Into<String>) -> Self {
        Token { text: text.into(), column_extras: Vec::new() }
    }
}

/// One sentence with its gold tags and, for prediction or combined
/// files, predicted tags. Tag vectors always match `tokens` in length.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Sentence {
    pub tokens: Vec<Token>,
    pub gold_tags: Vec<TagLabel>,
    pub pred_tags: Option<Vec<TagLabel>>,
}

impl Sentence {
    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }

    pub fn texts(&self) -> Vec<&str> {
        self.tokens.iter().map(|t| t.text.as_str()).collect()
    }
}

/// A typed token span of one sentence, with copies of the covered surface
/// forms.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Mention {
    pub doc: usize,
    pub sent: usize,
    pub start: usize,
    pub end: usize,
    pub etype: EntityType,
    pub tokens: Vec<String>,
}

impl Mention {
    pub fn span(&self) -> Span {
        Span::new(self.start, self.end, self.etype.clone())
    }

    /// Positional identity used for exact-match scoring.
    pub fn location(&self) -> (usize, usize, usize, usize, &EntityType) {
        (self.doc, self.sent, self.start, self.end, &self.etype)
    }
}

/// Decodes one sentence's tags into mentions located at `(doc, sent)`.
pub fn decode_tags<S: AsRef<str>>(tags: &[TagLabel], tokens: &[S], doc: usize, sent: usize) -> Vec<Mention> {
    assert_eq!(tags.len(), tokens.len(), "tags and tokens must have equal length");
    chunk_spans(tags)
        .into_iter()
        .map(|s| Mention {
            doc,
            sent,
            tokens: tokens[s.start..s.end].iter().map(|t| t.as_ref().to_string()).collect(),
            start: s.start,
            end: s.end,
            etype: s.etype,
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Corpus {
    pub documents: Vec<Vec<Sentence>>,
    pub scheme: TagScheme,
    pub source_name: String,
}

impl Corpus {
    /// Sentences with their `(doc, sent)` indices, in file order.
    pub fn sentences(&self) -> impl Iterator<Item = (usize, usize, &Sentence)> {
        self.documents
            .iter()
            .enumerate()
            .flat_map(|(d, doc)| doc.iter().enumerate().map(move |(s, sent)| (d, s, sent)))
    }

    pub fn sentence_count(&self) -> usize {
        self.documents.iter().map(Vec::len).sum()
    }

    pub fn token_count(&self) -> usize {
        self.sentences().map(|(_, _, s)| s.len()).sum()
    }

    pub fn gold_mentions(&self) -> Vec<Mention> {
        self.sentences()
            .flat_map(|(d, s, sent)| decode_tags(&sent.gold_tags, &sent.texts(), d, s))
            .collect()
    }

    /// `None` unless every sentence carries predicted tags.
    pub fn pred_mentions(&self) -> Option<Vec<Mention>> {
        let mut out = Vec::new();
        for (d, s, sent) in self.sentences() {
            out.extend(decode_tags(sent.pred_tags.as_ref()?, &sent.texts(), d, s));
        }
        Some(out)
    }

    /// Hex SHA-256 over the tokens and gold tags, independent of extra
    /// columns, predictions, and the source name.
    pub fn gold_fingerprint(&self) -> String {
        use sha2::{Digest, Sha256};
        let mut hasher = Sha256::new();
        for doc in &self.documents {
            hasher.update(b"\x1ddoc\n");
            for sent in doc {
                for (tok, tag) in sent.tokens.iter().zip(&sent.gold_tags) {
                    hasher.update(tok.text.as_bytes());
                    hasher.update(b" ");
                    hasher.update(tag.to_string().as_bytes());
                    hasher.update(b"\n");
                }
                hasher.update(b"\n");
            }
        }
        hasher.finalize().iter().map(|b| format!("{b:02x}")).collect()
    }
}
