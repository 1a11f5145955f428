//! Tag labels, tagging schemes, and conversion between tag sequences and
//! chunk spans.
//!
//! Chunk boundaries follow the rules of the CoNLL `conlleval` scorer, which
//! are total: every tag sequence decodes to a set of chunks. An `I-X` that
//! follows `O` or a chunk of another type opens a new chunk, an `E-X` or
//! `S-X` always closes the chunk it ends, and a sentence boundary closes
//! whatever is still open. Because these rules recognise every flag in
//! every position, decoding does not depend on which scheme produced the
//! tags; the scheme only matters when encoding.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Dataset-defined entity type such as `PER` or `GPE`. Compared by exact,
/// case-sensitive string equality.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct EntityType(String);

impl EntityType {
    /// Returns `None` for an empty name.
    pub fn new(name: impl Into<String>) -> Option<Self> {
        let name = name.into();
        if name.is_empty() {
            None
        } else {
            Some(EntityType(name))
        }
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for EntityType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Flag {
    O,
    B,
    I,
    E,
    S,
}

impl Flag {
    fn as_char(self) -> char {
        match self {
            Flag::O => 'O',
            Flag::B => 'B',
            Flag::I => 'I',
            Flag::E => 'E',
            Flag::S => 'S',
        }
    }
}

/// One cell of a tag column, e.g. `B-PER` or `O`.
///
/// The type is present exactly when the flag is not `O`; the constructors
/// enforce this.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TagLabel {
    flag: Flag,
    etype: Option<EntityType>,
}

impl TagLabel {
    pub fn outside() -> Self {
        TagLabel { flag: Flag::O, etype: None }
    }

    /// A chunk tag. `flag` must not be `Flag::O`.
    pub fn chunk(flag: Flag, etype: EntityType) -> Self {
        assert!(flag != Flag::O, "chunk tags need a B/I/E/S flag");
        TagLabel { flag, etype: Some(etype) }
    }

    pub fn flag(&self) -> Flag {
        self.flag
    }

    pub fn etype(&self) -> Option<&EntityType> {
        self.etype.as_ref()
    }

    pub fn is_outside(&self) -> bool {
        self.flag == Flag::O
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("unrecognised tag {0:?} (expected O, B-X, I-X, E-X or S-X)")]
pub struct UnknownTag(pub String);

impl FromStr for TagLabel {
    type Err = UnknownTag;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s == "O" {
            return Ok(TagLabel::outside());
        }
        let bad = || UnknownTag(s.to_string());
        // Split on the first '-' only; the type may itself contain '-'.
        let (flag, etype) = s.split_once('-').ok_or_else(bad)?;
        let flag = match flag {
            "B" => Flag::B,
            "I" => Flag::I,
            "E" => Flag::E,
            "S" => Flag::S,
            _ => return Err(bad()),
        };
        let etype = EntityType::new(etype).ok_or_else(bad)?;
        Ok(TagLabel::chunk(flag, etype))
    }
}

impl fmt::Display for TagLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.etype {
            None => f.write_str("O"),
            Some(t) => write!(f, "{}-{}", self.flag.as_char(), t),
        }
    }
}

/// Chunk-encoding scheme of a tag column.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum TagScheme {
    /// `B` only where a chunk directly follows a chunk of the same type.
    #[serde(rename = "IOB1")]
    Iob1,
    /// `B` on the first token of every chunk (a.k.a. BIO).
    #[serde(rename = "IOB2")]
    Iob2,
    #[serde(rename = "BIOES")]
    Bioes,
}

impl TagScheme {
    pub const ALL: [TagScheme; 3] = [TagScheme::Iob1, TagScheme::Iob2, TagScheme::Bioes];

    pub fn permits(self, flag: Flag) -> bool {
        match self {
            TagScheme::Iob1 | TagScheme::Iob2 => matches!(flag, Flag::O | Flag::B | Flag::I),
            TagScheme::Bioes => true,
        }
    }
}

impl fmt::Display for TagScheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TagScheme::Iob1 => "IOB1",
            TagScheme::Iob2 => "IOB2",
            TagScheme::Bioes => "BIOES",
        })
    }
}

/// A typed token range `[start, end)` within one sentence.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Span {
    pub start: usize,
    pub end: usize,
    pub etype: EntityType,
}

impl Span {
    pub fn new(start: usize, end: usize, etype: EntityType) -> Self {
        Span { start, end, etype }
    }
}

fn ends_chunk(prev: &TagLabel, cur: &TagLabel) -> bool {
    use Flag::*;
    match (prev.flag, cur.flag) {
        (O, _) => false,
        (E, _) | (S, _) => true,
        (B | I, B | S | O) => true,
        _ => prev.etype != cur.etype,
    }
}

fn starts_chunk(prev: &TagLabel, cur: &TagLabel) -> bool {
    use Flag::*;
    match (prev.flag, cur.flag) {
        (_, O) => false,
        (_, B | S) => true,
        (E | S | O, E | I) => true,
        _ => prev.etype != cur.etype,
    }
}

/// Extracts the maximal chunks of one sentence's tag sequence.
///
/// Never fails; malformed sequences are repaired the way `conlleval` reads
/// them.
pub fn chunk_spans(tags: &[TagLabel]) -> Vec<Span> {
    let outside = TagLabel::outside();
    let mut spans = Vec::new();
    let mut open: Option<(usize, &EntityType)> = None;
    let mut prev = &outside;
    for (i, cur) in tags.iter().enumerate() {
        if ends_chunk(prev, cur) {
            if let Some((start, etype)) = open.take() {
                spans.push(Span::new(start, i, etype.clone()));
            }
        }
        if starts_chunk(prev, cur) {
            if let Some((start, etype)) = open.take() {
                spans.push(Span::new(start, i, etype.clone()));
            }
            open = cur.etype().map(|t| (i, t));
        }
        prev = cur;
    }
    if let Some((start, etype)) = open {
        spans.push(Span::new(start, tags.len(), etype.clone()));
    }
    spans
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EncodeError {
    #[error("mentions {first:?} and {second:?} overlap")]
    OverlappingMentions { first: (usize, usize), second: (usize, usize) },
    #[error("mention [{start}, {end}) does not fit a sentence of {len} tokens")]
    OutOfBounds { start: usize, end: usize, len: usize },
}

/// Writes `spans` as a tag sequence of length `len` under `scheme`.
///
/// `chunk_spans(&encode_tags(spans, len, scheme)?)` returns the spans in
/// start order.
pub fn encode_tags(spans: &[Span], len: usize, scheme: TagScheme) -> Result<Vec<TagLabel>, EncodeError> {
    let mut sorted: Vec<&Span> = spans.iter().collect();
    sorted.sort_by_key(|s| (s.start, s.end));
    for s in &sorted {
        if s.start >= s.end || s.end > len {
            return Err(EncodeError::OutOfBounds { start: s.start, end: s.end, len });
        }
    }
    for pair in sorted.windows(2) {
        if pair[1].start < pair[0].end {
            return Err(EncodeError::OverlappingMentions {
                first: (pair[0].start, pair[0].end),
                second: (pair[1].start, pair[1].end),
            });
        }
    }

    let mut tags = vec![TagLabel::outside(); len];
    let mut prev: Option<&Span> = None;
    for s in sorted {
        let glued = prev.is_some_and(|p| p.end == s.start && p.etype == s.etype);
        let t = &s.etype;
        match scheme {
            TagScheme::Iob1 => {
                let first = if glued { Flag::B } else { Flag::I };
                tags[s.start] = TagLabel::chunk(first, t.clone());
                for tag in &mut tags[s.start + 1..s.end] {
                    *tag = TagLabel::chunk(Flag::I, t.clone());
                }
            }
            TagScheme::Iob2 => {
                tags[s.start] = TagLabel::chunk(Flag::B, t.clone());
                for tag in &mut tags[s.start + 1..s.end] {
                    *tag = TagLabel::chunk(Flag::I, t.clone());
                }
            }
            TagScheme::Bioes => {
                if s.end - s.start == 1 {
                    tags[s.start] = TagLabel::chunk(Flag::S, t.clone());
                } else {
                    tags[s.start] = TagLabel::chunk(Flag::B, t.clone());
                    for tag in &mut tags[s.start + 1..s.end - 1] {
                        *tag = TagLabel::chunk(Flag::I, t.clone());
                    }
                    tags[s.end - 1] = TagLabel::chunk(Flag::E, t.clone());
                }
            }
        }
        prev = Some(s);
    }
    Ok(tags)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
#[error("no entity tags found; the tag scheme cannot be detected and must be given explicitly")]
pub struct NoEntities;

/// Guesses the scheme of a collection of sentence tag sequences.
///
/// Any `E`/`S` flag means BIOES. Otherwise a `B` that IOB1 would not need
/// (one not directly after a chunk token of the same type) means IOB2.
/// Everything else is IOB1.
pub fn detect_scheme<'a, I>(sentences: I) -> Result<TagScheme, NoEntities>
where
    I: IntoIterator<Item = &'a [TagLabel]>,
{
    let mut any_entity = false;
    let mut unneeded_b = false;
    for tags in sentences {
        let mut prev: Option<&TagLabel> = None;
        for tag in tags {
            match tag.flag {
                Flag::E | Flag::S => return Ok(TagScheme::Bioes),
                Flag::B => {
                    let after_same = prev.is_some_and(|p| !p.is_outside() && p.etype == tag.etype);
                    if !after_same {
                        unneeded_b = true;
                    }
                    any_entity = true;
                }
                Flag::I => any_entity = true,
                Flag::O => {}
            }
            prev = Some(tag);
        }
    }
    match (any_entity, unneeded_b) {
        (false, _) => Err(NoEntities),
        (true, true) => Ok(TagScheme::Iob2),
        (true, false) => Ok(TagScheme::Iob1),
    }
}
