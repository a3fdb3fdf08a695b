//! Overlap and contamination analysis between division schemes.
//!
//! Two representations are supported: half-open index intervals over one
//! sorted document list (what the published range tables reduce to), and
//! explicit name labelings (needed for schemes that were drawn at random and
//! have no range form).

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;
use std::ops::Range;

use serde::Serialize;
use thiserror::Error;

use crate::corpus::{CorpusManifest, DivisionLabel, Labeling};
use crate::num::WordCount;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CompatError {
    #[error("schemes cover different corpus sizes ({a} vs {b} documents)")]
    MismatchedCorpusSize { a: usize, b: usize },
    #[error("intervals do not tile [0, N): {0}")]
    NotATiling(String),
    #[error("invalid interval [{start}, {end})")]
    EmptyInterval { start: usize, end: usize },
    #[error("label {0} does not occur in the scheme")]
    UnknownLabel(DivisionLabel),
    #[error(
        "assignments cover different documents ({} only in A, {} only in B)",
        only_a.len(),
        only_b.len()
    )]
    UniverseMismatch { only_a: Vec<String>, only_b: Vec<String> },
    #[error("document {0:?} is not in the manifest")]
    MissingFromManifest(String),
    #[error("word count overflow")]
    Overflow,
}

/// A division as the half-open index range `[start, end)` of a sorted
/// document list.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IntervalDivision {
    pub label: DivisionLabel,
    pub start: usize,
    pub end: usize,
}

impl IntervalDivision {
    pub fn new(label: DivisionLabel, start: usize, end: usize) -> Result<Self, CompatError> {
        if start >= end {
            return Err(CompatError::EmptyInterval { start, end });
        }
        Ok(IntervalDivision { label, start, end })
    }

    pub fn len(&self) -> usize {
        self.end - self.start
    }

    pub fn is_empty(&self) -> bool {
        self.start >= self.end
    }

    pub fn range(&self) -> Range<usize> {
        self.start..self.end
    }

    pub fn intersection_len(&self, other: &IntervalDivision) -> usize {
        self.end.min(other.end).saturating_sub(self.start.max(other.start))
    }

    pub fn contains(&self, other: &IntervalDivision) -> bool {
        self.start <= other.start && other.end <= self.end
    }
}

/// Checks that the intervals tile `[0, N)` without gaps or overlaps and
/// returns `N`.
pub fn tiling_size(divisions: &[IntervalDivision]) -> Result<usize, CompatError> {
    let mut sorted: Vec<&IntervalDivision> = divisions.iter().collect();
    sorted.sort_by_key(|d| d.start);
    let mut next = 0;
    for d in sorted {
        if d.is_empty() {
            return Err(CompatError::EmptyInterval {
                start: d.start,
                end: d.end,
            });
        }
        if d.start != next {
            return Err(CompatError::NotATiling(format!(
                "{} starts at {} but the previous interval ends at {next}",
                d.label, d.start
            )));
        }
        next = d.end;
    }
    if next == 0 {
        return Err(CompatError::NotATiling("no intervals".into()));
    }
    Ok(next)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OverlapPair<W = u64> {
    pub a: DivisionLabel,
    pub b: DivisionLabel,
    pub docs: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub words: Option<W>,
}

/// A TRAIN set on one side sharing documents with an evaluation set on the
/// other. Owners are written `scheme.LABEL`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Contamination {
    pub train: String,
    pub test: String,
    pub docs: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OverlapReport<W = u64> {
    pub corpus_size: usize,
    pub pairs: Vec<OverlapPair<W>>,
    pub contamination: Vec<Contamination>,
}

impl<W: WordCount> OverlapReport<W> {
    pub fn shared(&self, a: &DivisionLabel, b: &DivisionLabel) -> Option<usize> {
        self.pairs.iter().find(|p| &p.a == a && &p.b == b).map(|p| p.docs)
    }

    /// Aligned-column rendering for terminals.
    pub fn to_text(&self) -> String {
        let with_words = self.pairs.iter().any(|p| p.words.is_some());
        let mut rows: Vec<[String; 4]> = vec![["A".into(), "B".into(), "DOCS".into(), "WORDS".into()]];
        for p in &self.pairs {
            rows.push([
                p.a.to_string(),
                p.b.to_string(),
                p.docs.to_string(),
                p.words.map(|w| w.to_string()).unwrap_or_default(),
            ]);
        }
        let cols = if with_words { 4 } else { 3 };
        let widths: Vec<usize> = (0..cols)
            .map(|c| rows.iter().map(|r| r[c].chars().count()).max().unwrap_or(0))
            .collect();
        let mut out = format!("corpus size: {}\n", self.corpus_size);
        for r in &rows {
            let mut line = String::new();
            for c in 0..cols {
                if c > 0 {
                    line.push_str("  ");
                }
                if c >= 2 {
                    let _ = write!(line, "{:>w$}", r[c], w = widths[c]);
                } else {
                    let _ = write!(line, "{:<w$}", r[c], w = widths[c]);
                }
            }
            out.push_str(line.trim_end());
            out.push('\n');
        }
        if self.contamination.is_empty() {
            out.push_str("contamination: none\n");
        } else {
            for c in &self.contamination {
                let _ = writeln!(out, "contamination: {} shares {} documents with {}", c.train, c.docs, c.test);
            }
        }
        out
    }
}

fn labels_in_order<'a>(labels: impl Iterator<Item = &'a DivisionLabel>) -> Vec<DivisionLabel> {
    let mut out: Vec<DivisionLabel> = Vec::new();
    for l in labels {
        if !out.contains(l) {
            out.push(l.clone());
        }
    }
    out
}

fn contamination_entries<W>(a_name: &str, b_name: &str, pairs: &[OverlapPair<W>]) -> Vec<Contamination> {
    let owner = |scheme: &str, l: &DivisionLabel| format!("{scheme}.{l}");
    let mut out = Vec::new();
    for p in pairs.iter().filter(|p| p.docs > 0) {
        if p.a == DivisionLabel::Train && p.b.is_evaluation() {
            out.push(Contamination {
                train: owner(a_name, &p.a),
                test: owner(b_name, &p.b),
                docs: p.docs,
            });
        }
    }
    for p in pairs.iter().filter(|p| p.docs > 0) {
        if p.b == DivisionLabel::Train && p.a.is_evaluation() {
            out.push(Contamination {
                train: owner(b_name, &p.b),
                test: owner(a_name, &p.a),
                docs: p.docs,
            });
        }
    }
    out
}

/// Shared document counts for every label pair of two interval schemes over
/// the same corpus.
pub fn overlap_intervals(
    a_name: &str,
    a: &[IntervalDivision],
    b_name: &str,
    b: &[IntervalDivision],
) -> Result<OverlapReport, CompatError> {
    let n = tiling_size(a)?;
    let m = tiling_size(b)?;
    if n != m {
        return Err(CompatError::MismatchedCorpusSize { a: n, b: m });
    }
    let mut pairs = Vec::new();
    for la in labels_in_order(a.iter().map(|d| &d.label)) {
        for lb in labels_in_order(b.iter().map(|d| &d.label)) {
            let docs = a
                .iter()
                .filter(|d| d.label == la)
                .flat_map(|da| b.iter().filter(|d| d.label == lb).map(move |db| da.intersection_len(db)))
                .sum();
            pairs.push(OverlapPair {
                a: la.clone(),
                b: lb,
                docs,
                words: None,
            });
        }
    }
    let contamination = contamination_entries(a_name, b_name, &pairs);
    Ok(OverlapReport {
        corpus_size: n,
        pairs,
        contamination,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ContaminationVerdict {
    pub safe: bool,
    pub shared: usize,
}

/// Is a model trained on `train_label` of one scheme safe to evaluate on
/// `test_label` of another? Safe iff the two document sets are disjoint.
pub fn contamination_check(
    train_scheme: &[IntervalDivision],
    train_label: &DivisionLabel,
    test_scheme: &[IntervalDivision],
    test_label: &DivisionLabel,
) -> Result<ContaminationVerdict, CompatError> {
    let n = tiling_size(train_scheme)?;
    let m = tiling_size(test_scheme)?;
    if n != m {
        return Err(CompatError::MismatchedCorpusSize { a: n, b: m });
    }
    let pick = |scheme: &[IntervalDivision], label: &DivisionLabel| -> Result<Vec<IntervalDivision>, CompatError> {
        let v: Vec<_> = scheme.iter().filter(|d| &d.label == label).cloned().collect();
        if v.is_empty() {
            return Err(CompatError::UnknownLabel(label.clone()));
        }
        Ok(v)
    };
    let train = pick(train_scheme, train_label)?;
    let test = pick(test_scheme, test_label)?;
    let shared = train
        .iter()
        .flat_map(|t| test.iter().map(move |u| t.intersection_len(u)))
        .sum();
    Ok(ContaminationVerdict { safe: shared == 0, shared })
}

/// [`contamination_check`] over name labelings.
pub fn contamination_check_labelings(
    train: &Labeling,
    train_label: &DivisionLabel,
    test: &Labeling,
    test_label: &DivisionLabel,
) -> Result<ContaminationVerdict, CompatError> {
    check_universe(train, test)?;
    let train_set: BTreeSet<&str> = train.members(train_label).collect();
    let test_set: BTreeSet<&str> = test.members(test_label).collect();
    if train_set.is_empty() {
        return Err(CompatError::UnknownLabel(train_label.clone()));
    }
    if test_set.is_empty() {
        return Err(CompatError::UnknownLabel(test_label.clone()));
    }
    let shared = train_set.intersection(&test_set).count();
    Ok(ContaminationVerdict { safe: shared == 0, shared })
}

fn check_universe(a: &Labeling, b: &Labeling) -> Result<(), CompatError> {
    let only_a: Vec<String> = a.names().filter(|n| b.get(n).is_none()).map(str::to_string).collect();
    let only_b: Vec<String> = b.names().filter(|n| a.get(n).is_none()).map(str::to_string).collect();
    if only_a.is_empty() && only_b.is_empty() {
        Ok(())
    } else {
        Err(CompatError::UniverseMismatch { only_a, only_b })
    }
}

/// Overlap report over exact name sets. Word totals per pair are included
/// when a manifest is supplied.
pub fn compare_assignments<W: WordCount>(
    a_name: &str,
    a: &Labeling,
    b_name: &str,
    b: &Labeling,
    manifest: Option<&CorpusManifest<W>>,
) -> Result<OverlapReport<W>, CompatError> {
    check_universe(a, b)?;
    let counts = manifest.map(|m| m.word_counts());
    let mut cells: BTreeMap<(&DivisionLabel, &DivisionLabel), (usize, W)> = BTreeMap::new();
    for (name, la) in a.iter() {
        let lb = b.get(name).expect("universes checked equal");
        let words = match &counts {
            Some(c) => *c
                .get(name)
                .ok_or_else(|| CompatError::MissingFromManifest(name.to_string()))?,
            None => W::zero(),
        };
        let cell = cells.entry((la, lb)).or_insert((0, W::zero()));
        cell.0 += 1;
        cell.1 = cell.1.checked_add(&words).ok_or(CompatError::Overflow)?;
    }
    let mut pairs = Vec::new();
    for la in a.labels() {
        for lb in b.labels() {
            let (docs, words) = cells.get(&(&la, &lb)).copied().unwrap_or((0, W::zero()));
            pairs.push(OverlapPair {
                a: la.clone(),
                b: lb,
                docs,
                words: counts.as_ref().map(|_| words),
            });
        }
    }
    let contamination = contamination_entries(a_name, b_name, &pairs);
    Ok(OverlapReport {
        corpus_size: a.len(),
        pairs,
        contamination,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SupersetCheck<T> {
    pub holds: bool,
    pub missing: Vec<T>,
}

/// Does the new TEST set include every document of the old one?
pub fn test_superset_check<T: Ord + Clone>(new_test: &BTreeSet<T>, old_test: &BTreeSet<T>) -> SupersetCheck<T> {
    let missing: Vec<T> = old_test.difference(new_test).cloned().collect();
    SupersetCheck {
        holds: missing.is_empty(),
        missing,
    }
}

/// Index set covered by a list of intervals.
pub fn interval_members(divisions: &[IntervalDivision]) -> BTreeSet<usize> {
    divisions.iter().flat_map(IntervalDivision::range).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn iv(label: &str, start: usize, end: usize) -> IntervalDivision {
        IntervalDivision::new(DivisionLabel::parse(label).unwrap(), start, end).unwrap()
    }

    fn atb3() -> Vec<IntervalDivision> {
        vec![iv("DEV", 0, 58), iv("TRAIN", 58, 538), iv("TEST", 538, 599)]
    }

    fn zitouni() -> Vec<IntervalDivision> {
        vec![iv("TRAIN", 0, 509), iv("DEVTEST", 509, 599)]
    }

    fn mada() -> Vec<IntervalDivision> {
        vec![iv("TRAIN", 0, 509), iv("DEV", 509, 554), iv("TEST", 554, 599)]
    }

    fn l(s: &str) -> DivisionLabel {
        DivisionLabel::parse(s).unwrap()
    }

    #[test]
    fn zitouni_versus_rule_split() {
        let r = overlap_intervals("zitouni", &zitouni(), "10-80-10", &atb3()).unwrap();
        assert_eq!(r.corpus_size, 599);
        assert_eq!(r.shared(&l("DEVTEST"), &l("TRAIN")), Some(29));
        assert_eq!(r.shared(&l("DEVTEST"), &l("TEST")), Some(61));
        assert_eq!(r.shared(&l("DEVTEST"), &l("DEV")), Some(0));
        assert_eq!(r.shared(&l("TRAIN"), &l("DEV")), Some(58));
        assert_eq!(
            r.contamination,
            vec![Contamination {
                train: "10-80-10.TRAIN".into(),
                test: "zitouni.DEVTEST".into(),
                docs: 29
            }]
        );
    }

    #[test]
    fn self_overlap_is_diagonal() {
        let r = overlap_intervals("x", &atb3(), "x", &atb3()).unwrap();
        for p in &r.pairs {
            let expect = if p.a == p.b { atb3().iter().find(|d| d.label == p.a).unwrap().len() } else { 0 };
            assert_eq!(p.docs, expect);
        }
        assert!(r.contamination.is_empty());
    }

    #[test]
    fn mada_test_nested_in_rule_test() {
        let r = overlap_intervals("mada", &mada(), "10-80-10", &atb3()).unwrap();
        assert_eq!(r.shared(&l("TEST"), &l("TEST")), Some(45));
        assert_eq!(atb3()[2].len() - 45, 16);
        let check = test_superset_check(&interval_members(&atb3()[2..]), &interval_members(&mada()[2..]));
        assert!(check.holds);
        assert!(atb3()[2].contains(&mada()[2]));
    }

    #[test]
    fn contamination_verdicts() {
        let v = contamination_check(&atb3(), &DivisionLabel::Train, &mada(), &DivisionLabel::Test).unwrap();
        assert_eq!(v, ContaminationVerdict { safe: true, shared: 0 });
        let v = contamination_check(&zitouni(), &DivisionLabel::Train, &atb3(), &DivisionLabel::Test).unwrap();
        assert_eq!(v, ContaminationVerdict { safe: true, shared: 0 });
        let v = contamination_check(&atb3(), &DivisionLabel::Train, &zitouni(), &l("DEVTEST")).unwrap();
        assert_eq!(v, ContaminationVerdict { safe: false, shared: 29 });
        assert_eq!(
            contamination_check(&atb3(), &l("TUNE"), &mada(), &DivisionLabel::Test),
            Err(CompatError::UnknownLabel(l("TUNE")))
        );
    }

    #[test]
    fn size_and_tiling_errors() {
        let short = vec![iv("TRAIN", 0, 500)];
        assert_eq!(
            overlap_intervals("a", &short, "b", &atb3()),
            Err(CompatError::MismatchedCorpusSize { a: 500, b: 599 })
        );
        let gap = vec![iv("TRAIN", 0, 10), iv("TEST", 11, 20)];
        assert!(matches!(tiling_size(&gap), Err(CompatError::NotATiling(_))));
        assert!(IntervalDivision::new(DivisionLabel::Dev, 3, 3).is_err());
    }

    fn labeling(entries: &[(&str, &str)]) -> Labeling {
        entries.iter().map(|(n, lab)| (n.to_string(), l(lab))).collect()
    }

    #[test]
    fn name_set_comparison() {
        let a = labeling(&[("w", "TRAIN"), ("x", "TEST"), ("y", "TEST"), ("z", "TEST")]);
        let b = labeling(&[("w", "TEST"), ("x", "TRAIN"), ("y", "TEST"), ("z", "TEST")]);
        let r = compare_assignments::<u64>("A", &a, "B", &b, None).unwrap();
        assert_eq!(r.shared(&l("TEST"), &l("TEST")), Some(2));
        assert_eq!(r.contamination.len(), 2);
        let same = compare_assignments::<u64>("A", &a, "A", &a, None).unwrap();
        assert!(same.pairs.iter().all(|p| (p.a == p.b) == (p.docs > 0)));
    }

    #[test]
    fn name_set_words() {
        let a = labeling(&[("x", "TRAIN"), ("y", "TEST")]);
        let m = CorpusManifest::new(
            "c",
            vec![crate::corpus::DocumentRecord::new("x", 7u32), crate::corpus::DocumentRecord::new("y", 5)],
        );
        let r = compare_assignments("A", &a, "B", &a, Some(&m)).unwrap();
        assert_eq!(r.pairs[0].words, Some(7));
        let json = serde_json::to_string(&r).unwrap();
        assert!(json.starts_with(r#"{"corpus_size":2,"pairs":[{"a":"TRAIN","b":"TRAIN","docs":1,"words":7}"#));
    }

    #[test]
    fn universe_mismatch() {
        let a = labeling(&[("x", "TRAIN"), ("y", "TEST")]);
        let b = labeling(&[("x", "TRAIN"), ("z", "TEST")]);
        assert_eq!(
            compare_assignments::<u64>("A", &a, "B", &b, None),
            Err(CompatError::UniverseMismatch { only_a: vec!["y".into()], only_b: vec!["z".into()] })
        );
    }

    #[test]
    fn superset() {
        let set = |v: &[&str]| v.iter().map(|s| s.to_string()).collect::<BTreeSet<_>>();
        assert!(test_superset_check(&set(&["a", "b", "c"]), &set(&["a", "b"])).holds);
        let c = test_superset_check(&set(&["a", "c"]), &set(&["a", "b"]));
        assert!(!c.holds);
        assert_eq!(c.missing, vec!["b".to_string()]);
    }

    #[test]
    fn text_rendering() {
        let r = overlap_intervals("mada", &mada(), "10-80-10", &atb3()).unwrap();
        let text = r.to_text();
        assert!(text.starts_with("corpus size: 599\nA      B      DOCS\n"), "{text}");
        assert!(text.contains("contamination: none"));
    }
}
