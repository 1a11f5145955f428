mod common;

use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use tmr::conll::Mention;
use tmr::taxonomy::{composition, Subset, SubsetAssignment, TcmClass, TrainIndex, UnseenClass};

fn case() -> impl Strategy<Value = (Vec<Mention>, Vec<Mention>)> {
    any::<u64>().prop_map(|seed| common::random_taxonomy_case(&mut ChaCha8Rng::seed_from_u64(seed)))
}

fn labels(train: &[Mention], test: &[Mention]) -> Vec<(&'static str, &'static str)> {
    SubsetAssignment::new(test.to_vec(), &TrainIndex::build(train))
        .labels()
        .iter()
        .map(|l| (l.unseen.name(), l.tcm.name()))
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn matches_brute_force((train, test) in case()) {
        prop_assert_eq!(labels(&train, &test), common::oracle_labels(&train, &test));
    }

    #[test]
    fn subset_identities((train, test) in case()) {
        let a = SubsetAssignment::new(test, &TrainIndex::build(&train));
        let table = composition(&a);
        for c in table.columns.iter().map(|(_, c)| c).chain([&table.all]) {
            prop_assert_eq!(c.get(Subset::UnseenAny), c.get(Subset::UnseenTokens) + c.get(Subset::UnseenType));
            prop_assert_eq!(c.get(Subset::TcmAll), c.get(Subset::TcmSeen) + c.get(Subset::TcmUnseen));
            prop_assert_eq!(c.get(Subset::All), c.get(Subset::Seen) + c.get(Subset::UnseenAny));
            prop_assert!(c.get(Subset::TcmUnseen) <= c.get(Subset::UnseenTokens));
        }
        let summed: usize = table.columns.iter().map(|(_, c)| c.total).sum();
        prop_assert_eq!(summed, table.all.total);
        for l in a.labels() {
            prop_assert!(l.tcm != TcmClass::TcmUnseen || l.unseen == UnseenClass::UnseenTokens);
        }
    }

    #[test]
    fn matching_is_case_sensitive((_, test) in case()) {
        let lowered: Vec<Mention> = test
            .iter()
            .map(|m| Mention { tokens: m.tokens.iter().map(|t| t.to_lowercase()).collect(), ..m.clone() })
            .collect();
        let a = SubsetAssignment::new(test.clone(), &TrainIndex::build(&lowered));
        for (m, l) in a.iter() {
            if m.tokens.iter().any(|t| *t != t.to_lowercase()) {
                prop_assert_eq!(l.unseen, UnseenClass::UnseenTokens, "{:?}", m.tokens);
            }
        }
    }

    #[test]
    fn type_confusability_ignores_training((train, test) in case(), other_seed in any::<u64>()) {
        let (other_train, _) = common::random_taxonomy_case(&mut ChaCha8Rng::seed_from_u64(other_seed));
        let tcm = |train: &[Mention]| -> Vec<bool> {
            SubsetAssignment::new(test.clone(), &TrainIndex::build(train))
                .labels()
                .iter()
                .map(|l| l.tcm != TcmClass::NotTcm)
                .collect()
        };
        prop_assert_eq!(tcm(&train), tcm(&other_train));
        prop_assert_eq!(tcm(&train), tcm(&[]));
    }

    #[test]
    fn more_training_never_unsees((train, test) in case(), extra_seed in any::<u64>()) {
        let (extra, _) = common::random_taxonomy_case(&mut ChaCha8Rng::seed_from_u64(extra_seed));
        let before = SubsetAssignment::new(test.clone(), &TrainIndex::build(&train));
        let after = SubsetAssignment::new(test, &TrainIndex::build(train.iter().chain(&extra)));
        for (b, a) in before.labels().iter().zip(after.labels()) {
            match b.unseen {
                UnseenClass::Seen => prop_assert_eq!(a.unseen, UnseenClass::Seen),
                UnseenClass::UnseenType => prop_assert_ne!(a.unseen, UnseenClass::UnseenTokens),
                UnseenClass::UnseenTokens => {}
            }
        }
    }

    #[test]
    fn test_as_training_is_all_seen((_, test) in case()) {
        let a = SubsetAssignment::new(test.clone(), &TrainIndex::build(&test));
        prop_assert!(a.labels().iter().all(|l| l.unseen == UnseenClass::Seen));
    }

    #[test]
    fn labels_follow_their_mentions((train, test) in case(), seed in any::<u64>()) {
        let mut shuffled = test.clone();
        shuffled.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
        let idx = TrainIndex::build(&train);
        let a = SubsetAssignment::new(test, &idx);
        let b = SubsetAssignment::new(shuffled, &idx);
        let mut x: Vec<_> = a.iter().collect();
        let mut y: Vec<_> = b.iter().collect();
        x.sort_by(|p, q| p.0.cmp(q.0));
        y.sort_by(|p, q| p.0.cmp(q.0));
        prop_assert_eq!(x, y);
    }
}

#[test]
fn newcastle_example_classification() {
    let m = |sent, tokens: &[&str], t| Mention {
        doc: 0,
        sent,
        start: 0,
        end: tokens.len(),
        etype: common::ty(t),
        tokens: tokens.iter().map(|s| s.to_string()).collect(),
    };
    let train = [m(0, &["Newcastle"], "LOC"), m(0, &["UK"], "LOC")];
    let test = vec![m(0, &["John", "Brown"], "PER"), m(0, &["Newcastle"], "ORG"), m(1, &["UK"], "LOC")];
    assert_eq!(
        labels(&train, &test),
        vec![("UnseenTokens", "NotTCM"), ("UnseenType", "NotTCM"), ("Seen", "NotTCM")]
    );
}
