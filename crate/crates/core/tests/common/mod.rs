//! Test-only reference implementations and generators.
//!
//! Nothing here calls into the library's decoding, taxonomy or scoring
//! code; these are the independent sides of the differential checks.

#![allow(dead_code)]

use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand::Rng;
use tmr::conll::{EntityType, Mention};

// ------------------------------------------------------------ conlleval port

/// Chunk counts for one type as conlleval reports them.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct ChunkCounts {
    pub gold: u64,
    pub pred: u64,
    pub correct: u64,
}

impl ChunkCounts {
    /// conlleval.pl's precision, recall and FB1 (percentages, 0 on a zero
    /// denominator).
    pub fn prf(&self) -> [f64; 3] {
        let p = if self.pred > 0 { 100.0 * self.correct as f64 / self.pred as f64 } else { 0.0 };
        let r = if self.gold > 0 { 100.0 * self.correct as f64 / self.gold as f64 } else { 0.0 };
        let f = if p + r > 0.0 { 2.0 * p * r / (p + r) } else { 0.0 };
        [p, r, f]
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ConllevalResult {
    pub overall: ChunkCounts,
    pub types: BTreeMap<String, ChunkCounts>,
}

fn split_tag(t: &str) -> (&str, &str) {
    match t.split_once('-') {
        Some((f, ty)) => (f, ty),
        None => (t, ""),
    }
}

fn end_of_chunk(prev: &str, tag: &str, prev_type: &str, ty: &str) -> bool {
    let mut end = false;
    if prev == "E" || prev == "S" {
        end = true;
    }
    if (prev == "B" || prev == "I") && (tag == "B" || tag == "S" || tag == "O") {
        end = true;
    }
    if prev != "O" && prev != "." && prev_type != ty {
        end = true;
    }
    if prev == "]" || prev == "[" {
        end = true;
    }
    end
}

fn start_of_chunk(prev: &str, tag: &str, prev_type: &str, ty: &str) -> bool {
    let mut start = false;
    if tag == "B" || tag == "S" {
        start = true;
    }
    if (prev == "E" || prev == "S" || prev == "O") && (tag == "E" || tag == "I") {
        start = true;
    }
    if tag != "O" && tag != "." && prev_type != ty {
        start = true;
    }
    if tag == "[" || tag == "]" {
        start = true;
    }
    start
}

/// Streams a combined `token ... gold pred` file the way conlleval.pl
/// does, with blank lines as sentence boundaries.
pub fn conlleval(text: &str) -> ConllevalResult {
    let mut res = ConllevalResult::default();
    let mut in_correct = false;
    let (mut last_correct, mut last_correct_type) = ("O".to_string(), String::new());
    let (mut last_guessed, mut last_guessed_type) = ("O".to_string(), String::new());

    let lines = text.lines().map(|l| l.trim_end_matches('\r')).chain(std::iter::once(""));
    for line in lines {
        let fields: Vec<&str> = line.split_whitespace().collect();
        let boundary = fields.is_empty();
        let (gold_tag, pred_tag) = if boundary {
            ("O", "O")
        } else {
            (fields[fields.len() - 2], fields[fields.len() - 1])
        };
        let (correct, correct_type) = split_tag(gold_tag);
        let (guessed, guessed_type) = split_tag(pred_tag);

        let end_correct = end_of_chunk(&last_correct, correct, &last_correct_type, correct_type);
        let end_guessed = end_of_chunk(&last_guessed, guessed, &last_guessed_type, guessed_type);
        let start_correct = start_of_chunk(&last_correct, correct, &last_correct_type, correct_type);
        let start_guessed = start_of_chunk(&last_guessed, guessed, &last_guessed_type, guessed_type);

        if in_correct {
            if end_correct && end_guessed && last_guessed_type == last_correct_type {
                in_correct = false;
                res.types.entry(last_correct_type.clone()).or_default().correct += 1;
                res.overall.correct += 1;
            } else if end_correct != end_guessed || guessed_type != correct_type {
                in_correct = false;
            }
        }
        if start_correct && start_guessed && guessed_type == correct_type {
            in_correct = true;
        }
        if start_correct {
            res.types.entry(correct_type.to_string()).or_default().gold += 1;
            res.overall.gold += 1;
        }
        if start_guessed {
            res.types.entry(guessed_type.to_string()).or_default().pred += 1;
            res.overall.pred += 1;
        }
        last_correct = correct.to_string();
        last_correct_type = correct_type.to_string();
        last_guessed = guessed.to_string();
        last_guessed_type = guessed_type.to_string();
    }
    if in_correct {
        res.types.entry(last_correct_type).or_default().correct += 1;
        res.overall.correct += 1;
    }
    res
}

/// Chunks `(start, end, type)` of one tag line as conlleval would count
/// them, found by running the stream scorer on gold-only input.
pub fn conlleval_chunks(tags: &[String]) -> Vec<(usize, usize, String)> {
    let mut chunks = Vec::new();
    let mut open: Option<(usize, String)> = None;
    let (mut prev, mut prev_type) = ("O".to_string(), String::new());
    for (i, t) in tags.iter().map(String::as_str).chain(std::iter::once("O")).enumerate() {
        let (flag, ty) = split_tag(t);
        if end_of_chunk(&prev, flag, &prev_type, ty) {
            if let Some((s, ty)) = open.take() {
                chunks.push((s, i, ty));
            }
        }
        if start_of_chunk(&prev, flag, &prev_type, ty) {
            open = Some((i, ty.to_string()));
        }
        prev = flag.to_string();
        prev_type = ty.to_string();
    }
    chunks
}

// ------------------------------------------------------------ taxonomy oracle

/// Labels by direct quadratic scans over the definitions:
/// `(unseen_class, tcm_class)` as the library's names.
pub fn oracle_labels(train: &[Mention], test: &[Mention]) -> Vec<(&'static str, &'static str)> {
    test.iter()
        .map(|m| {
            let mut same_tokens = false;
            let mut same_pair = false;
            for t in train {
                if t.tokens == m.tokens {
                    same_tokens = true;
                    if t.etype == m.etype {
                        same_pair = true;
                    }
                }
            }
            let unseen = if same_pair {
                "Seen"
            } else if same_tokens {
                "UnseenType"
            } else {
                "UnseenTokens"
            };
            let mut confusable = false;
            for other in test {
                if other.tokens == m.tokens && other.etype != m.etype {
                    confusable = true;
                }
            }
            let tcm = match (confusable, unseen) {
                (false, _) => "NotTCM",
                (true, "UnseenTokens") => "TCMUnseen",
                (true, _) => "TCMSeen",
            };
            (unseen, tcm)
        })
        .collect()
}

// ------------------------------------------------------------ generators

pub const VOCAB: [&str; 8] = ["Boston", "New", "York", "John", "Brown", "Red", "Sox", "UK"];

pub fn ty(name: &str) -> EntityType {
    EntityType::new(name).unwrap()
}

/// A random mention surface: 1-3 words from a small vocabulary with
/// occasional lower/upper-casing, so key collisions and near-misses are
/// frequent.
pub fn random_tokens<R: Rng>(rng: &mut R) -> Vec<String> {
    let n = rng.gen_range(1..=3);
    (0..n)
        .map(|_| {
            let w = *VOCAB.choose(rng).unwrap();
            match rng.gen_range(0..10) {
                0 => w.to_lowercase(),
                1 => w.to_uppercase(),
                _ => w.to_string(),
            }
        })
        .collect()
}

/// Mentions placed one per sentence so spans never overlap.
pub fn random_mentions<R: Rng>(rng: &mut R, count: usize, types: &[EntityType], doc: usize) -> Vec<Mention> {
    (0..count)
        .map(|sent| {
            let tokens = random_tokens(rng);
            let start = rng.gen_range(0..3);
            Mention {
                doc,
                sent,
                start,
                end: start + tokens.len(),
                etype: types.choose(rng).unwrap().clone(),
                tokens,
            }
        })
        .collect()
}

/// A random (train, test) pair: ≤ 50 test mentions over ≤ 5 types. Some
/// training mentions are copied from test, with random re-casing or
/// re-typing, so every subset is populated on typical draws.
pub fn random_taxonomy_case<R: Rng>(rng: &mut R) -> (Vec<Mention>, Vec<Mention>) {
    let all_types = ["PER", "LOC", "ORG", "MISC", "GPE"];
    let n_types = rng.gen_range(1..=5);
    let types: Vec<EntityType> = all_types[..n_types].iter().map(|t| ty(t)).collect();
    let (n_test, n_train) = (rng.gen_range(0..=50), rng.gen_range(0..=30));
    let test = random_mentions(rng, n_test, &types, 0);
    let mut train = random_mentions(rng, n_train, &types, 0);
    for m in &test {
        if rng.gen_bool(0.3) {
            let mut copy = m.clone();
            match rng.gen_range(0..4) {
                0 => copy.etype = types.choose(rng).unwrap().clone(),
                1 => copy.tokens = copy.tokens.iter().map(|t| t.to_lowercase()).collect(),
                _ => {}
            }
            train.push(copy);
        }
    }
    (train, test)
}

/// Random predictions against `gold`: each gold mention is predicted
/// exactly, with a wrong type, with a wrong boundary, or not at all; plus
/// occasional spurious mentions in fresh sentences.
pub fn random_predictions<R: Rng>(rng: &mut R, gold: &[Mention], types: &[EntityType]) -> Vec<Mention> {
    let mut pred = Vec::new();
    for m in gold {
        match rng.gen_range(0..5) {
            0 | 1 => pred.push(m.clone()),
            2 => {
                let mut p = m.clone();
                p.etype = types.choose(rng).unwrap().clone();
                pred.push(p);
            }
            3 => {
                let mut p = m.clone();
                p.end += 1;
                p.tokens.push("x".into());
                pred.push(p);
            }
            _ => {}
        }
    }
    for i in 0..rng.gen_range(0..3) {
        pred.push(Mention {
            doc: 0,
            sent: gold.len() + i,
            start: 0,
            end: 1,
            etype: types.choose(rng).unwrap().clone(),
            tokens: vec!["spurious".into()],
        });
    }
    pred
}
