#[path = "support/oracle.rs"]
mod oracle;

use std::collections::BTreeSet;

use corpus_divisions::compat::{interval_members, IntervalDivision};
use corpus_divisions::splitter::{split_bounds, verify_split, write_assignment, load_assignment};
use corpus_divisions::{
    carve_extra, compare_assignments, count_words_tree, load_manifest, overlap_intervals, parse_trees, split,
    write_manifest, CorpusManifest, DivisionLabel, DocumentRecord, Fraction, Labeling, SplitPolicy,
};
use oracle::{reference_split, Outcome};
use proptest::prelude::*;

fn names_and_counts(max_docs: usize) -> impl Strategy<Value = Vec<(String, u64)>> {
    prop::collection::btree_set("[a-z0-9_.]{1,8}", 1..max_docs).prop_flat_map(|names| {
        let n = names.len();
        (Just(names), prop::collection::vec(0u64..10_000, n))
            .prop_map(|(names, counts)| names.into_iter().zip(counts).collect())
    })
}

fn manifest(docs: &[(String, u64)]) -> CorpusManifest {
    CorpusManifest::new("prop", docs.iter().map(|(n, c)| DocumentRecord::new(n.clone(), *c)).collect())
}

fn fractions() -> impl Strategy<Value = ((u64, u64), (u64, u64))> {
    // Each fraction in (0, 1/2); their sum stays below one.
    ((1u64..50, 100u64..=100), (1u64..50, 100u64..=100))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(400))]

    #[test]
    fn split_agrees_with_reference(docs in names_and_counts(60), (d, t) in fractions()) {
        let policy = SplitPolicy::new(Fraction::new(d.0, d.1), Fraction::new(t.0, t.1)).unwrap();
        let expected = reference_split(&docs, d, t);
        match split(&manifest(&docs), &policy) {
            Ok(a) => {
                let got = Outcome::Split(
                    a.members(&DivisionLabel::Dev).iter().map(|s| s.to_string()).collect(),
                    a.members(&DivisionLabel::Train).iter().map(|s| s.to_string()).collect(),
                    a.members(&DivisionLabel::Test).iter().map(|s| s.to_string()).collect(),
                );
                prop_assert_eq!(got, expected);
            }
            Err(corpus_divisions::splitter::SplitError::Infeasible { .. }) => prop_assert_eq!(expected, Outcome::Infeasible),
            Err(corpus_divisions::splitter::SplitError::EmptyCorpus { .. }) => prop_assert_eq!(expected, Outcome::Empty),
            Err(e) => prop_assert!(false, "unexpected error {e}"),
        }
    }

    #[test]
    fn split_is_a_contiguous_minimal_partition(docs in names_and_counts(80)) {
        let m = manifest(&docs);
        let policy = SplitPolicy::default();
        let Ok(a) = split(&m, &policy) else { return Ok(()) };
        prop_assert_eq!(a.labeling().len(), docs.len());
        // Labels in sorted-name order read DEV* TRAIN* TEST*, none empty.
        let seq: Vec<&DivisionLabel> = a.labeling().iter().map(|(_, l)| l).collect();
        let rank = |l: &DivisionLabel| match l { DivisionLabel::Dev => 0, DivisionLabel::Train => 1, _ => 2 };
        prop_assert!(seq.windows(2).all(|w| rank(w[0]) <= rank(w[1])));
        for l in [DivisionLabel::Dev, DivisionLabel::Train, DivisionLabel::Test] {
            prop_assert!(!a.members(&l).is_empty());
        }
        let total: u64 = docs.iter().map(|d| d.1).sum();
        let counts = m.word_counts();
        for (label, last) in [(DivisionLabel::Dev, true), (DivisionLabel::Test, false)] {
            let members = a.members(&label);
            let words: u64 = members.iter().map(|n| counts[n]).sum();
            prop_assert!(words * 10 > total);
            let edge = if last { members.last() } else { members.first() }.unwrap();
            prop_assert!((words - counts[edge]) * 10 <= total);
        }
        prop_assert!(verify_split(&m, a.labeling(), &policy).unwrap().is_empty());
    }

    #[test]
    fn split_ignores_record_order(docs in names_and_counts(40), seed in any::<u64>()) {
        let mut shuffled = docs.clone();
        // Deterministic rotation plus reversal driven by the seed.
        let k = (seed as usize) % shuffled.len();
        shuffled.rotate_left(k);
        if seed % 2 == 0 {
            shuffled.reverse();
        }
        let p = SplitPolicy::default();
        let a = split(&manifest(&docs), &p).map(|a| a.into_labeling());
        let b = split(&manifest(&shuffled), &p).map(|a| a.into_labeling());
        prop_assert_eq!(a.ok(), b.ok());
    }

    #[test]
    fn bounds_match_split(weights in prop::collection::vec(0u64..1000, 1..50)) {
        let docs: Vec<(String, u64)> = weights.iter().enumerate().map(|(i, w)| (format!("d{i:03}"), *w)).collect();
        let p = SplitPolicy::default();
        match (split_bounds(&weights, &p), split(&manifest(&docs), &p)) {
            (Ok(b), Ok(a)) => {
                prop_assert_eq!(b.dev_end, a.members(&DivisionLabel::Dev).len());
                prop_assert_eq!(b.len - b.test_start, a.members(&DivisionLabel::Test).len());
            }
            (Err(_), Err(_)) => {}
            (x, y) => prop_assert!(false, "disagree: {:?} vs {:?}", x, y.map(|_| ())),
        }
    }

    #[test]
    fn carving_leaves_dev_and_test_alone(docs in names_and_counts(80), pct in 1u64..30) {
        let m = manifest(&docs);
        let Ok(a) = split(&m, &SplitPolicy::default()) else { return Ok(()) };
        let tune = DivisionLabel::Named("TUNE".into());
        let Ok(c) = carve_extra(&a, &m, tune.clone(), &Fraction::new(pct, 100)) else { return Ok(()) };
        for l in [DivisionLabel::Dev, DivisionLabel::Test] {
            prop_assert_eq!(a.members(&l), c.members(&l));
        }
        let old_train = a.members(&DivisionLabel::Train);
        let carved = c.members(&tune);
        let rest = c.members(&DivisionLabel::Train);
        prop_assert!(!carved.is_empty() && !rest.is_empty());
        prop_assert_eq!([carved, rest].concat(), old_train);
    }

    #[test]
    fn manifest_tsv_round_trips(docs in names_and_counts(40)) {
        let m = manifest(&docs);
        let text = write_manifest(&m);
        let back: CorpusManifest = load_manifest("prop", &text).unwrap();
        prop_assert_eq!(write_manifest(&back), text);
        let mut sorted = m.documents.clone();
        sorted.sort_by(|a, b| a.name.cmp(&b.name));
        prop_assert_eq!(back.documents, sorted);
    }

    #[test]
    fn assignment_tsv_round_trips(docs in names_and_counts(40)) {
        let Ok(a) = split(&manifest(&docs), &SplitPolicy::default()) else { return Ok(()) };
        let text = write_assignment(a.labeling());
        let back = load_assignment(&text).unwrap();
        prop_assert_eq!(&back, a.labeling());
        prop_assert_eq!(write_assignment(&back), text);
    }

    #[test]
    fn tree_word_count_never_exceeds_leaves(leaves in prop::collection::vec((any::<bool>(), "[a-z]{1,5}"), 1..30)) {
        let body: String = leaves
            .iter()
            .map(|(empty, w)| if *empty { "(-NONE- *T*)".to_string() } else { format!("(NN {w})") })
            .collect::<Vec<_>>()
            .join(" ");
        let text = format!("(S {body})");
        let total_leaves: usize = parse_trees(&text).unwrap().iter().map(|t| t.leaf_count()).sum();
        let words = count_words_tree(&text).unwrap();
        prop_assert!(words <= total_leaves);
        prop_assert_eq!(words, leaves.iter().filter(|(e, _)| !e).count());
    }

    #[test]
    fn overlap_is_symmetric_and_conserves_rows(a in tiling(), b_cuts in prop::collection::vec(any::<prop::sample::Index>(), 1..4)) {
        let n = a.last().unwrap().end;
        let b = cut(n, &b_cuts, "B");
        let ab = overlap_intervals("a", &a, "b", &b).unwrap();
        let ba = overlap_intervals("b", &b, "a", &a).unwrap();
        for p in &ab.pairs {
            prop_assert_eq!(ba.shared(&p.b, &p.a), Some(p.docs));
        }
        for da in &a {
            let row: usize = ab.pairs.iter().filter(|p| p.a == da.label).map(|p| p.docs).sum();
            let size: usize = a.iter().filter(|d| d.label == da.label).map(|d| d.len()).sum();
            prop_assert_eq!(row, size);
        }
        prop_assert_eq!(ab.pairs.iter().map(|p| p.docs).sum::<usize>(), n);
        let members: BTreeSet<usize> = interval_members(&a);
        prop_assert_eq!(members.len(), n);
    }

    #[test]
    fn name_and_interval_comparisons_agree(a in tiling(), b_cuts in prop::collection::vec(any::<prop::sample::Index>(), 1..4)) {
        let n = a.last().unwrap().end;
        let b = cut(n, &b_cuts, "B");
        let label_names = |ds: &[IntervalDivision]| -> Labeling {
            ds.iter().flat_map(|d| d.range().map(move |i| (format!("doc{i:05}"), d.label.clone()))).collect()
        };
        let by_name = compare_assignments::<u64>("a", &label_names(&a), "b", &label_names(&b), None).unwrap();
        let by_interval = overlap_intervals("a", &a, "b", &b).unwrap();
        prop_assert_eq!(by_name.corpus_size, by_interval.corpus_size);
        for p in &by_interval.pairs {
            prop_assert_eq!(by_name.shared(&p.a, &p.b).unwrap_or(0), p.docs);
        }
    }
}

fn cut(n: usize, cuts: &[prop::sample::Index], prefix: &str) -> Vec<IntervalDivision> {
    let mut points: Vec<usize> = cuts.iter().map(|c| 1 + c.index(n.max(2) - 1)).filter(|&p| p < n).collect();
    points.sort();
    points.dedup();
    let mut out = Vec::new();
    let mut start = 0;
    for (i, p) in points.iter().chain(std::iter::once(&n)).enumerate() {
        out.push(IntervalDivision::new(DivisionLabel::Named(format!("{prefix}{i}")), start, *p).unwrap());
        start = *p;
    }
    out
}

fn tiling() -> impl Strategy<Value = Vec<IntervalDivision>> {
    (2usize..300, prop::collection::vec(any::<prop::sample::Index>(), 1..5)).prop_map(|(n, cuts)| {
        // Reuse labels so a label may own several intervals.
        let mut t = cut(n, &cuts, "A");
        for (i, d) in t.iter_mut().enumerate() {
            d.label = [DivisionLabel::Train, DivisionLabel::Dev, DivisionLabel::Test][i % 3].clone();
        }
        t
    })
}
