//! Unseen and type-confusable mention subsets.
//!
//! A test mention is *seen* when its exact token sequence occurred as a
//! training mention with the same type, *unseen-type* when the token
//! sequence occurred in training only with other types, and
//! *unseen-tokens* when it never occurred as a training mention. Matching
//! is case sensitive and whole-sequence; unannotated training text never
//! counts.
//!
//! A test mention is *type-confusable* (TCM) when its token sequence is
//! annotated with two or more distinct types somewhere in the test gold.
//! Confusability is a property of the test set alone, so editing the
//! training data can move a TCM between TCM-Seen and TCM-Unseen but never
//! in or out of TCM-All.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt;

use serde::Serialize;

use crate::conll::{EntityType, Mention};

/// The exact token sequence of a mention.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct MentionKey(Vec<String>);

impl MentionKey {
    pub fn of(m: &Mention) -> Self {
        MentionKey(m.tokens.clone())
    }

    pub fn tokens(&self) -> &[String] {
        &self.0
    }
}

impl<S: Into<String>> FromIterator<S> for MentionKey {
    fn from_iter<I: IntoIterator<Item = S>>(iter: I) -> Self {
        MentionKey(iter.into_iter().map(Into::into).collect())
    }
}

/// Token sequences and (token sequence, type) pairs of the training gold
/// mentions.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct TrainIndex {
    seen_pairs: HashSet<(MentionKey, EntityType)>,
    seen_keys: HashSet<MentionKey>,
}

impl TrainIndex {
    pub fn build<'a, I: IntoIterator<Item = &'a Mention>>(train_gold: I) -> Self {
        let mut idx = TrainIndex::default();
        idx.extend(train_gold);
        idx
    }

    /// Adds more gold mentions, e.g. a development split.
    pub fn extend<'a, I: IntoIterator<Item = &'a Mention>>(&mut self, mentions: I) {
        for m in mentions {
            let key = MentionKey::of(m);
            self.seen_keys.insert(key.clone());
            self.seen_pairs.insert((key, m.etype.clone()));
        }
    }

    pub fn contains_pair(&self, key: &MentionKey, etype: &EntityType) -> bool {
        self.seen_keys.contains(key) && self.seen_pairs.contains(&(key.clone(), etype.clone()))
    }

    pub fn contains_key(&self, key: &MentionKey) -> bool {
        self.seen_keys.contains(key)
    }

    pub fn seen_pairs(&self) -> &HashSet<(MentionKey, EntityType)> {
        &self.seen_pairs
    }

    pub fn seen_keys(&self) -> &HashSet<MentionKey> {
        &self.seen_keys
    }

    pub fn is_empty(&self) -> bool {
        self.seen_keys.is_empty()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum UnseenClass {
    Seen,
    UnseenTokens,
    UnseenType,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum TcmClass {
    #[serde(rename = "NotTCM")]
    NotTcm,
    #[serde(rename = "TCMSeen")]
    TcmSeen,
    #[serde(rename = "TCMUnseen")]
    TcmUnseen,
}

impl UnseenClass {
    pub fn name(self) -> &'static str {
        match self {
            UnseenClass::Seen => "Seen",
            UnseenClass::UnseenTokens => "UnseenTokens",
            UnseenClass::UnseenType => "UnseenType",
        }
    }
}

impl TcmClass {
    pub fn name(self) -> &'static str {
        match self {
            TcmClass::NotTcm => "NotTCM",
            TcmClass::TcmSeen => "TCMSeen",
            TcmClass::TcmUnseen => "TCMUnseen",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct SubsetLabel {
    pub unseen: UnseenClass,
    pub tcm: TcmClass,
}

/// The named mention subsets, in report order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Subset {
    All,
    Seen,
    UnseenAny,
    UnseenTokens,
    UnseenType,
    TcmAll,
    TcmSeen,
    TcmUnseen,
}

impl Subset {
    pub const ALL: [Subset; 8] = [
        Subset::All,
        Subset::Seen,
        Subset::UnseenAny,
        Subset::UnseenTokens,
        Subset::UnseenType,
        Subset::TcmAll,
        Subset::TcmSeen,
        Subset::TcmUnseen,
    ];

    /// The six rows of a composition table.
    pub const COMPOSITION: [Subset; 6] = [
        Subset::UnseenAny,
        Subset::UnseenTokens,
        Subset::UnseenType,
        Subset::TcmAll,
        Subset::TcmSeen,
        Subset::TcmUnseen,
    ];

    pub fn contains(self, label: SubsetLabel) -> bool {
        match self {
            Subset::All => true,
            Subset::Seen => label.unseen == UnseenClass::Seen,
            Subset::UnseenAny => label.unseen != UnseenClass::Seen,
            Subset::UnseenTokens => label.unseen == UnseenClass::UnseenTokens,
            Subset::UnseenType => label.unseen == UnseenClass::UnseenType,
            Subset::TcmAll => label.tcm != TcmClass::NotTcm,
            Subset::TcmSeen => label.tcm == TcmClass::TcmSeen,
            Subset::TcmUnseen => label.tcm == TcmClass::TcmUnseen,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Subset::All => "All",
            Subset::Seen => "Seen",
            Subset::UnseenAny => "Unseen-Any",
            Subset::UnseenTokens => "Unseen-Tokens",
            Subset::UnseenType => "Unseen-Type",
            Subset::TcmAll => "TCM-All",
            Subset::TcmSeen => "TCM-Seen",
            Subset::TcmUnseen => "TCM-Unseen",
        }
    }
}

impl fmt::Display for Subset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

pub fn classify_unseen(m: &Mention, idx: &TrainIndex) -> UnseenClass {
    let key = MentionKey::of(m);
    if idx.contains_pair(&key, &m.etype) {
        UnseenClass::Seen
    } else if idx.contains_key(&key) {
        UnseenClass::UnseenType
    } else {
        UnseenClass::UnseenTokens
    }
}

/// Labels each test mention by type confusability within `test_gold`.
///
/// `unseen` must be parallel to `test_gold`.
pub fn classify_tcm(test_gold: &[Mention], unseen: &[UnseenClass]) -> Vec<TcmClass> {
    assert_eq!(test_gold.len(), unseen.len(), "one unseen class per test mention");
    let mut types: HashMap<MentionKey, HashSet<&EntityType>> = HashMap::new();
    for m in test_gold {
        types.entry(MentionKey::of(m)).or_default().insert(&m.etype);
    }
    test_gold
        .iter()
        .zip(unseen)
        .map(|(m, &u)| {
            if types[&MentionKey::of(m)].len() < 2 {
                TcmClass::NotTcm
            } else if u == UnseenClass::UnseenTokens {
                TcmClass::TcmUnseen
            } else {
                TcmClass::TcmSeen
            }
        })
        .collect()
}

/// Test gold mentions with one subset label each, in the mentions' order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubsetAssignment {
    mentions: Vec<Mention>,
    labels: Vec<SubsetLabel>,
}

impl SubsetAssignment {
    pub fn new(test_gold: Vec<Mention>, idx: &TrainIndex) -> Self {
        let unseen: Vec<UnseenClass> = test_gold.iter().map(|m| classify_unseen(m, idx)).collect();
        let tcm = classify_tcm(&test_gold, &unseen);
        let labels = unseen.into_iter().zip(tcm).map(|(unseen, tcm)| SubsetLabel { unseen, tcm }).collect();
        SubsetAssignment { mentions: test_gold, labels }
    }

    pub fn mentions(&self) -> &[Mention] {
        &self.mentions
    }

    pub fn labels(&self) -> &[SubsetLabel] {
        &self.labels
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Mention, SubsetLabel)> + Clone {
        self.mentions.iter().zip(self.labels.iter().copied())
    }

    pub fn len(&self) -> usize {
        self.mentions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.mentions.is_empty()
    }

    /// Entries sorted by `(doc, sent, start)`.
    pub fn sorted(&self) -> Vec<(&Mention, SubsetLabel)> {
        let mut v: Vec<_> = self.iter().collect();
        v.sort_by(|a, b| a.0.cmp(b.0));
        v
    }
}

/// Subset sizes for one column of a composition table.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct SubsetCounts {
    pub total: usize,
    pub seen: usize,
    pub unseen_tokens: usize,
    pub unseen_type: usize,
    pub tcm_seen: usize,
    pub tcm_unseen: usize,
}

impl SubsetCounts {
    fn add(&mut self, label: SubsetLabel) {
        self.total += 1;
        match label.unseen {
            UnseenClass::Seen => self.seen += 1,
            UnseenClass::UnseenTokens => self.unseen_tokens += 1,
            UnseenClass::UnseenType => self.unseen_type += 1,
        }
        match label.tcm {
            TcmClass::NotTcm => {}
            TcmClass::TcmSeen => self.tcm_seen += 1,
            TcmClass::TcmUnseen => self.tcm_unseen += 1,
        }
    }

    pub fn get(&self, subset: Subset) -> usize {
        match subset {
            Subset::All => self.total,
            Subset::Seen => self.seen,
            Subset::UnseenAny => self.unseen_tokens + self.unseen_type,
            Subset::UnseenTokens => self.unseen_tokens,
            Subset::UnseenType => self.unseen_type,
            Subset::TcmAll => self.tcm_seen + self.tcm_unseen,
            Subset::TcmSeen => self.tcm_seen,
            Subset::TcmUnseen => self.tcm_unseen,
        }
    }
}

/// Per-type and overall subset counts of a test set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CompositionTable {
    /// Ordered by descending mention count, then type name.
    pub columns: Vec<(EntityType, SubsetCounts)>,
    pub all: SubsetCounts,
}

impl CompositionTable {
    pub fn column(&self, etype: &EntityType) -> Option<&SubsetCounts> {
        self.columns.iter().find(|(t, _)| t == etype).map(|(_, c)| c)
    }
}

pub fn composition(assignment: &SubsetAssignment) -> CompositionTable {
    let mut by_type: BTreeMap<&EntityType, SubsetCounts> = BTreeMap::new();
    let mut all = SubsetCounts::default();
    for (m, label) in assignment.iter() {
        by_type.entry(&m.etype).or_default().add(label);
        all.add(label);
    }
    let mut columns: Vec<(EntityType, SubsetCounts)> = by_type.into_iter().map(|(t, c)| (t.clone(), c)).collect();
    columns.sort_by(|a, b| b.1.total.cmp(&a.1.total).then_with(|| a.0.cmp(&b.0)));
    CompositionTable { columns, all }
}

/// Entity types ordered by descending test mention count, then name.
pub fn type_order(assignment: &SubsetAssignment) -> Vec<EntityType> {
    composition(assignment).columns.into_iter().map(|(t, _)| t).collect()
}
