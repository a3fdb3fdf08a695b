//! Deterministic front/back division of a sorted document list.
//!
//! DEV is the shortest prefix of the name-sorted documents whose word total
//! strictly exceeds `dev_fraction` of the corpus; TEST is the shortest suffix
//! strictly exceeding `test_fraction`; TRAIN is what lies between. Both
//! thresholds are taken against the whole-corpus total.

use std::collections::BTreeMap;
use std::fmt::{self, Write as _};

use num_traits::{CheckedAdd, NumCast, One, Zero};
use thiserror::Error;

use crate::corpus::{sort_documents, CorpusError, CorpusManifest, DivisionAssignment, DivisionLabel, Labeling};
use crate::ingest::IngestError;
use crate::num::{checked_sum, exceeds, Fraction, WordCount};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SplitError {
    #[error(transparent)]
    Corpus(#[from] CorpusError),
    #[error("{}corpus has no words to divide", genre_prefix(.genre))]
    EmptyCorpus { genre: Option<String> },
    #[error(
        "{}division infeasible: DEV needs the first {dev_docs} and TEST the last {test_docs} of {total_docs} documents, leaving TRAIN empty",
        genre_prefix(.genre)
    )]
    Infeasible {
        genre: Option<String>,
        dev_docs: usize,
        test_docs: usize,
        total_docs: usize,
    },
    #[error("document {0:?} has no genre tag")]
    MissingGenre(String),
    #[error("fractions must satisfy 0 < dev, 0 < test, dev + test < 1 (got {0})")]
    InvalidPolicy(String),
    #[error("target fraction must lie strictly between 0 and 1 (got {0})")]
    InvalidFraction(String),
    #[error("label {0} already exists or is reserved")]
    LabelClash(DivisionLabel),
    #[error("TRAIN ({train_docs} documents) cannot supply the requested share without being emptied")]
    InsufficientTrain { train_docs: usize },
    #[error("assignment statistics do not match the manifest")]
    ManifestMismatch,
    #[error("arithmetic overflow in threshold comparison")]
    Overflow,
}

fn genre_prefix(genre: &Option<String>) -> String {
    genre.as_ref().map(|g| format!("genre {g}: ")).unwrap_or_default()
}

/// Division fractions. Defaults to 1/10 for both DEV and TEST.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SplitPolicy<W: WordCount> {
    pub dev_fraction: Fraction<W>,
    pub test_fraction: Fraction<W>,
    pub stratify_by_genre: bool,
}

impl<W: WordCount> SplitPolicy<W> {
    pub fn new(dev_fraction: Fraction<W>, test_fraction: Fraction<W>) -> Result<Self, SplitError> {
        let zero = Fraction::zero();
        let bad = || SplitError::InvalidPolicy(format!("dev={dev_fraction}, test={test_fraction}"));
        if dev_fraction <= zero || test_fraction <= zero {
            return Err(bad());
        }
        let sum = dev_fraction.checked_add(&test_fraction).ok_or_else(bad)?;
        if sum >= Fraction::one() {
            return Err(bad());
        }
        Ok(SplitPolicy {
            dev_fraction,
            test_fraction,
            stratify_by_genre: false,
        })
    }

    pub fn stratified(mut self, yes: bool) -> Self {
        self.stratify_by_genre = yes;
        self
    }
}

impl<W: WordCount> Default for SplitPolicy<W> {
    fn default() -> Self {
        let ten: W = NumCast::from(10).expect("every integer type holds 10");
        let tenth = Fraction::new(W::one(), ten);
        SplitPolicy {
            dev_fraction: tenth,
            test_fraction: tenth,
            stratify_by_genre: false,
        }
    }
}

/// Index boundaries of a division over a sorted list of `len` documents:
/// DEV is `[0, dev_end)`, TRAIN `[dev_end, test_start)`, TEST `[test_start, len)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SplitBounds {
    pub dev_end: usize,
    pub test_start: usize,
    pub len: usize,
}

impl SplitBounds {
    pub fn label_at(&self, index: usize) -> DivisionLabel {
        if index < self.dev_end {
            DivisionLabel::Dev
        } else if index < self.test_start {
            DivisionLabel::Train
        } else {
            DivisionLabel::Test
        }
    }
}

/// Length of the shortest prefix of `weights` whose sum strictly exceeds
/// `fraction * total`, or `None` if no prefix does.
pub fn exceeding_prefix_len<W: WordCount>(
    weights: impl IntoIterator<Item = W>,
    fraction: &Fraction<W>,
    total: W,
) -> Result<Option<usize>, SplitError> {
    let mut acc = W::zero();
    for (i, w) in weights.into_iter().enumerate() {
        acc = acc.checked_add(&w).ok_or(SplitError::Overflow)?;
        if exceeds(acc, fraction, total).ok_or(SplitError::Overflow)? {
            return Ok(Some(i + 1));
        }
    }
    Ok(None)
}

/// Computes DEV/TEST boundaries over weights already in sorted-name order.
pub fn split_bounds<W: WordCount>(weights: &[W], policy: &SplitPolicy<W>) -> Result<SplitBounds, SplitError> {
    let total = checked_sum(weights.iter().copied()).ok_or(SplitError::Overflow)?;
    if total <= W::zero() {
        return Err(SplitError::EmptyCorpus { genre: None });
    }
    let len = weights.len();
    // A positive total always exceeds a fraction below one, so both scans end.
    let dev_docs = exceeding_prefix_len(weights.iter().copied(), &policy.dev_fraction, total)?.unwrap_or(len);
    let test_docs = exceeding_prefix_len(weights.iter().rev().copied(), &policy.test_fraction, total)?.unwrap_or(len);
    if dev_docs + test_docs >= len {
        return Err(SplitError::Infeasible {
            genre: None,
            dev_docs,
            test_docs,
            total_docs: len,
        });
    }
    Ok(SplitBounds {
        dev_end: dev_docs,
        test_start: len - test_docs,
        len,
    })
}

/// Divides the manifest into DEV, TRAIN and TEST.
///
/// The record order of the manifest does not matter; documents are sorted
/// by name first. `policy.stratify_by_genre` is ignored here; see
/// [`divide`] or [`split_stratified`].
pub fn split<W: WordCount>(
    manifest: &CorpusManifest<W>,
    policy: &SplitPolicy<W>,
) -> Result<DivisionAssignment<W>, SplitError> {
    manifest.ensure_valid()?;
    let docs = sort_documents(manifest)?;
    let weights: Vec<W> = docs.iter().map(|d| d.word_count).collect();
    let bounds = split_bounds(&weights, policy)?;
    let labeling = docs
        .into_iter()
        .enumerate()
        .map(|(i, d)| (d.name, bounds.label_at(i)))
        .collect();
    Ok(DivisionAssignment::from_labeling(manifest, labeling)?)
}

/// Splits each genre independently, as if every genre were its own corpus.
pub fn split_stratified<W: WordCount>(
    manifest: &CorpusManifest<W>,
    policy: &SplitPolicy<W>,
) -> Result<BTreeMap<String, DivisionAssignment<W>>, SplitError> {
    manifest.ensure_valid()?;
    let mut by_genre: BTreeMap<String, Vec<_>> = BTreeMap::new();
    for doc in sort_documents(manifest)? {
        let Some(genre) = doc.genre.clone() else {
            return Err(SplitError::MissingGenre(doc.name));
        };
        by_genre.entry(genre).or_default().push(doc);
    }
    by_genre
        .into_iter()
        .map(|(genre, docs)| {
            let sub = CorpusManifest::new(format!("{}/{}", manifest.corpus_id, genre), docs);
            let assignment = split(&sub, policy).map_err(|e| tag_genre(e, &genre))?;
            Ok((genre, assignment))
        })
        .collect()
}

fn tag_genre(err: SplitError, tag: &str) -> SplitError {
    match err {
        SplitError::Infeasible {
            dev_docs,
            test_docs,
            total_docs,
            ..
        } => SplitError::Infeasible {
            genre: Some(tag.to_string()),
            dev_docs,
            test_docs,
            total_docs,
        },
        SplitError::EmptyCorpus { .. } => SplitError::EmptyCorpus {
            genre: Some(tag.to_string()),
        },
        other => other,
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Division<W> {
    Whole(DivisionAssignment<W>),
    ByGenre(BTreeMap<String, DivisionAssignment<W>>),
}

impl<W: WordCount> Division<W> {
    /// Single labeling; per-genre labels are namespaced `GENRE:LABEL`.
    pub fn labeling(&self) -> Labeling {
        match self {
            Division::Whole(a) => a.labeling().clone(),
            Division::ByGenre(parts) => stratified_labeling(parts),
        }
    }
}

/// Runs [`split`] or [`split_stratified`] according to the policy.
pub fn divide<W: WordCount>(manifest: &CorpusManifest<W>, policy: &SplitPolicy<W>) -> Result<Division<W>, SplitError> {
    if policy.stratify_by_genre {
        split_stratified(manifest, policy).map(Division::ByGenre)
    } else {
        split(manifest, policy).map(Division::Whole)
    }
}

/// Moves the shortest front-of-TRAIN run whose words strictly exceed
/// `target_fraction` of the corpus into a new division. DEV and TEST are
/// left untouched.
pub fn carve_extra<W: WordCount>(
    assignment: &DivisionAssignment<W>,
    manifest: &CorpusManifest<W>,
    new_label: DivisionLabel,
    target_fraction: &Fraction<W>,
) -> Result<DivisionAssignment<W>, SplitError> {
    if new_label.is_canonical() || assignment.stats().contains_key(&new_label) {
        return Err(SplitError::LabelClash(new_label));
    }
    if *target_fraction <= Fraction::zero() || *target_fraction >= Fraction::one() {
        return Err(SplitError::InvalidFraction(target_fraction.to_string()));
    }
    let rebuilt = DivisionAssignment::from_labeling(manifest, assignment.labeling().clone())?;
    if rebuilt.stats() != assignment.stats() {
        return Err(SplitError::ManifestMismatch);
    }
    let counts = manifest.word_counts();
    let total = manifest.total_word_count()?;
    let train = assignment.members(&DivisionLabel::Train);
    let take = exceeding_prefix_len(train.iter().map(|n| counts[n]), target_fraction, total)?;
    let take = match take {
        Some(k) if k < train.len() => k,
        _ => {
            return Err(SplitError::InsufficientTrain {
                train_docs: train.len(),
            })
        }
    };
    let carved: Vec<&str> = train[..take].to_vec();
    let labeling = assignment
        .labeling()
        .iter()
        .map(|(name, label)| {
            let label = if carved.binary_search(&name).is_ok() {
                new_label.clone()
            } else {
                label.clone()
            };
            (name.to_string(), label)
        })
        .collect();
    Ok(DivisionAssignment::from_labeling(manifest, labeling)?)
}

/// Joins per-genre assignments into one labeling with `GENRE:LABEL` labels.
pub fn stratified_labeling<W: WordCount>(parts: &BTreeMap<String, DivisionAssignment<W>>) -> Labeling {
    parts
        .iter()
        .flat_map(|(genre, a)| {
            a.labeling()
                .iter()
                .map(move |(n, l)| (n.to_string(), DivisionLabel::Named(format!("{genre}:{l}"))))
        })
        .collect()
}

/// Splits a `GENRE:LABEL` label at its last colon.
pub fn split_genre_label(label: &DivisionLabel) -> Option<(&str, DivisionLabel)> {
    let DivisionLabel::Named(s) = label else { return None };
    let (genre, inner) = s.rsplit_once(':')?;
    if genre.is_empty() {
        return None;
    }
    DivisionLabel::parse(inner).ok().map(|l| (genre, l))
}

/// Assignment TSV: `name<TAB>LABEL` per line in sorted-name order.
pub fn write_assignment(labeling: &Labeling) -> String {
    let mut out = String::new();
    for (name, label) in labeling.iter() {
        let _ = writeln!(out, "{name}\t{label}");
    }
    out
}

/// Parses assignment TSV. `#` comment lines and blank lines are skipped.
pub fn load_assignment(tsv: &str) -> Result<Labeling, IngestError> {
    let mut labeling = Labeling::new();
    for (idx, line) in tsv.lines().enumerate() {
        let line_no = idx + 1;
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let malformed = |reason: String| IngestError::MalformedLine { line: line_no, reason };
        let Some((name, label)) = line.split_once('\t') else {
            return Err(malformed("expected name<TAB>LABEL".into()));
        };
        if name.is_empty() {
            return Err(malformed("empty document name".into()));
        }
        let label = DivisionLabel::parse(label).map_err(|e| malformed(e.to_string()))?;
        labeling
            .insert(name, label)
            .map_err(|_| malformed(format!("document {name:?} labeled twice")))?;
    }
    Ok(labeling)
}

/// Which division a threshold finding concerns.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum End {
    Dev,
    Test,
}

impl fmt::Display for End {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            End::Dev => "DEV",
            End::Test => "TEST",
        })
    }
}

/// A way in which an assignment departs from the rule-generated split.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SplitViolation {
    MissingDocuments(Vec<String>),
    UnknownDocuments(Vec<String>),
    UnexpectedLabel { label: DivisionLabel, docs: usize },
    EmptyDivision(DivisionLabel),
    Contiguity { name: String, label: DivisionLabel, previous: DivisionLabel },
    BelowThreshold { division: End, words: String, threshold: String },
    NotMinimal { division: End, boundary_doc: String },
    GenreMismatch { name: String, expected: Option<String>, found: String },
    NotStratified { name: String },
    EmptyCorpus,
    RuleInfeasible(String),
    DiffersFromRule { documents: usize },
    InGenre { genre: String, violation: Box<SplitViolation> },
}

impl SplitViolation {
    /// Short category name.
    pub fn kind(&self) -> &'static str {
        match self {
            SplitViolation::MissingDocuments(_) | SplitViolation::UnknownDocuments(_) => "partition",
            SplitViolation::UnexpectedLabel { .. } | SplitViolation::NotStratified { .. } => "label",
            SplitViolation::GenreMismatch { .. } => "genre",
            SplitViolation::EmptyDivision(_) => "empty-division",
            SplitViolation::Contiguity { .. } => "contiguity",
            SplitViolation::BelowThreshold { .. } => "threshold",
            SplitViolation::NotMinimal { .. } => "minimality",
            SplitViolation::EmptyCorpus | SplitViolation::RuleInfeasible(_) => "infeasible",
            SplitViolation::DiffersFromRule { .. } => "rule-mismatch",
            SplitViolation::InGenre { violation, .. } => violation.kind(),
        }
    }
}

impl fmt::Display for SplitViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SplitViolation::MissingDocuments(names) => {
                write!(f, "{} manifest documents have no label (first: {})", names.len(), names[0])
            }
            SplitViolation::UnknownDocuments(names) => {
                write!(f, "{} labeled documents are not in the manifest (first: {})", names.len(), names[0])
            }
            SplitViolation::UnexpectedLabel { label, docs } => {
                write!(f, "label {label} ({docs} documents) is not DEV, TRAIN or TEST")
            }
            SplitViolation::EmptyDivision(l) => write!(f, "{l} is empty"),
            SplitViolation::Contiguity { name, label, previous } => {
                write!(f, "{name} is labeled {label} but follows a {previous} document in sorted order")
            }
            SplitViolation::BelowThreshold { division, words, threshold } => {
                write!(f, "{division} holds {words} words, not more than the threshold {threshold}")
            }
            SplitViolation::NotMinimal { division, boundary_doc } => write!(
                f,
                "{division} still exceeds its threshold without {boundary_doc}; the division is larger than needed"
            ),
            SplitViolation::GenreMismatch { name, expected, found } => write!(
                f,
                "{name} is labeled under genre {found} but the manifest says {}",
                expected.as_deref().unwrap_or("(none)")
            ),
            SplitViolation::NotStratified { name } => write!(f, "{name} has no GENRE: prefix on its label"),
            SplitViolation::EmptyCorpus => write!(f, "corpus has no words"),
            SplitViolation::RuleInfeasible(why) => write!(f, "rule split is infeasible: {why}"),
            SplitViolation::DiffersFromRule { documents } => {
                write!(f, "{documents} documents differ from the rule-generated split")
            }
            SplitViolation::InGenre { genre, violation } => write!(f, "[{genre}] {violation}"),
        }
    }
}

fn rank(label: &DivisionLabel) -> Option<u8> {
    match label {
        DivisionLabel::Dev => Some(0),
        DivisionLabel::Train => Some(1),
        DivisionLabel::Test => Some(2),
        DivisionLabel::Named(_) => None,
    }
}

/// Checks an assignment against the division rule and lists every property
/// it violates. An empty list means it equals the rule-generated split.
pub fn verify_split<W: WordCount>(
    manifest: &CorpusManifest<W>,
    labeling: &Labeling,
    policy: &SplitPolicy<W>,
) -> Result<Vec<SplitViolation>, SplitError> {
    manifest.ensure_valid()?;
    let docs = sort_documents(manifest)?;
    let counts = manifest.word_counts();
    let mut out = Vec::new();

    let missing: Vec<String> = docs
        .iter()
        .filter(|d| labeling.get(&d.name).is_none())
        .map(|d| d.name.clone())
        .collect();
    let unknown: Vec<String> = labeling
        .names()
        .filter(|n| !counts.contains_key(n))
        .map(str::to_string)
        .collect();
    if !missing.is_empty() {
        out.push(SplitViolation::MissingDocuments(missing));
    }
    if !unknown.is_empty() {
        out.push(SplitViolation::UnknownDocuments(unknown));
    }
    if !out.is_empty() {
        return Ok(out);
    }

    let total = manifest.total_word_count()?;
    if total <= W::zero() {
        out.push(SplitViolation::EmptyCorpus);
        return Ok(out);
    }

    for label in labeling.labels() {
        if rank(&label).is_none() {
            let docs = labeling.members(&label).count();
            out.push(SplitViolation::UnexpectedLabel { label, docs });
        }
    }

    let mut previous: Option<&DivisionLabel> = None;
    for (name, label) in labeling.iter() {
        let Some(r) = rank(label) else { continue };
        if let Some(prev) = previous {
            if rank(prev).is_some_and(|p| p > r) {
                out.push(SplitViolation::Contiguity {
                    name: name.to_string(),
                    label: label.clone(),
                    previous: prev.clone(),
                });
                break;
            }
        }
        previous = Some(label);
    }

    for label in [DivisionLabel::Dev, DivisionLabel::Train, DivisionLabel::Test] {
        if labeling.members(&label).next().is_none() {
            out.push(SplitViolation::EmptyDivision(label));
        }
    }

    for (end, label, fraction) in [
        (End::Dev, DivisionLabel::Dev, &policy.dev_fraction),
        (End::Test, DivisionLabel::Test, &policy.test_fraction),
    ] {
        let members: Vec<&str> = labeling.members(&label).collect();
        let words = checked_sum(members.iter().map(|n| counts[n])).ok_or(SplitError::Overflow)?;
        if !exceeds(words, fraction, total).ok_or(SplitError::Overflow)? {
            out.push(SplitViolation::BelowThreshold {
                division: end,
                words: words.to_string(),
                threshold: format!("{}", fraction * Fraction::from(total)),
            });
            continue;
        }
        // The boundary document is the one nearest TRAIN.
        let boundary = match end {
            End::Dev => members.last(),
            End::Test => members.first(),
        };
        if let Some(b) = boundary {
            if exceeds(words - counts[b], fraction, total).ok_or(SplitError::Overflow)? {
                out.push(SplitViolation::NotMinimal {
                    division: end,
                    boundary_doc: b.to_string(),
                });
            }
        }
    }

    match split(manifest, policy) {
        Ok(rule) => {
            let differing = labeling
                .iter()
                .filter(|(n, l)| rule.label_of(n) != Some(*l))
                .count();
            if differing > 0 {
                out.push(SplitViolation::DiffersFromRule { documents: differing });
            }
        }
        Err(e @ SplitError::Infeasible { .. }) => out.push(SplitViolation::RuleInfeasible(e.to_string())),
        Err(e) => return Err(e),
    }
    Ok(out)
}

/// [`verify_split`] for `GENRE:LABEL` assignments: each genre is checked
/// against the split of its own sub-corpus.
pub fn verify_stratified<W: WordCount>(
    manifest: &CorpusManifest<W>,
    labeling: &Labeling,
    policy: &SplitPolicy<W>,
) -> Result<Vec<SplitViolation>, SplitError> {
    manifest.ensure_valid()?;
    let mut out = Vec::new();
    let genres: BTreeMap<&str, Option<&str>> = manifest
        .documents
        .iter()
        .map(|d| (d.name.as_str(), d.genre.as_deref()))
        .collect();
    let mut per_genre: BTreeMap<String, Labeling> = BTreeMap::new();
    for (name, label) in labeling.iter() {
        let Some((genre, inner)) = split_genre_label(label) else {
            out.push(SplitViolation::NotStratified { name: name.to_string() });
            continue;
        };
        match genres.get(name) {
            Some(expected) if *expected != Some(genre) => out.push(SplitViolation::GenreMismatch {
                name: name.to_string(),
                expected: expected.map(str::to_string),
                found: genre.to_string(),
            }),
            _ => {}
        }
        per_genre.entry(genre.to_string()).or_default().insert(name, inner)?;
    }
    let unknown: Vec<String> = labeling.names().filter(|n| !genres.contains_key(n)).map(str::to_string).collect();
    let missing: Vec<String> = genres.keys().filter(|n| labeling.get(n).is_none()).map(|n| n.to_string()).collect();
    if !missing.is_empty() {
        out.push(SplitViolation::MissingDocuments(missing));
    }
    if !unknown.is_empty() {
        out.push(SplitViolation::UnknownDocuments(unknown));
    }
    if let Some(d) = manifest.documents.iter().find(|d| d.genre.is_none()) {
        return Err(SplitError::MissingGenre(d.name.clone()));
    }
    if !out.is_empty() {
        return Ok(out);
    }
    for (genre, sub_labeling) in per_genre {
        let docs = manifest
            .documents
            .iter()
            .filter(|d| d.genre.as_deref() == Some(genre.as_str()))
            .cloned()
            .collect();
        let sub = CorpusManifest::new(format!("{}/{}", manifest.corpus_id, genre), docs);
        for v in verify_split(&sub, &sub_labeling, policy)? {
            out.push(SplitViolation::InGenre {
                genre: genre.clone(),
                violation: Box::new(v),
            });
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::DocumentRecord;

    fn manifest(counts: &[(&str, u64)]) -> CorpusManifest<u64> {
        CorpusManifest::new("t", counts.iter().map(|(n, w)| DocumentRecord::new(*n, *w)).collect())
    }

    fn labels(a: &DivisionAssignment<u64>) -> Vec<(String, String)> {
        a.labeling().iter().map(|(n, l)| (n.to_string(), l.to_string())).collect()
    }

    fn uniform10() -> CorpusManifest<u64> {
        let names: Vec<String> = (1..=10).map(|i| format!("d{i:02}")).collect();
        CorpusManifest::new("u", names.iter().map(|n| DocumentRecord::new(n.clone(), 10)).collect())
    }

    #[test]
    fn uniform_ten_docs() {
        let a = split(&uniform10(), &SplitPolicy::default()).unwrap();
        assert_eq!(a.members(&DivisionLabel::Dev), ["d01", "d02"]);
        assert_eq!(a.members(&DivisionLabel::Test), ["d09", "d10"]);
        assert_eq!(a.members(&DivisionLabel::Train).len(), 6);
        assert_eq!(a.stats_for(&DivisionLabel::Train).unwrap().word_count, 60);
    }

    #[test]
    fn heavy_last_document() {
        // Hand-executed: DEV 5,10,15 > 10 after three; TEST 55 > 10 after one.
        let names = ["a", "b", "c", "d", "e", "f", "g", "h", "i", "j"];
        let counts: Vec<(&str, u64)> = names.iter().map(|n| (*n, if *n == "j" { 55 } else { 5 })).collect();
        let a = split(&manifest(&counts), &SplitPolicy::default()).unwrap();
        assert_eq!(a.members(&DivisionLabel::Dev), ["a", "b", "c"]);
        assert_eq!(a.members(&DivisionLabel::Test), ["j"]);
        assert_eq!(a.members(&DivisionLabel::Train), ["d", "e", "f", "g", "h", "i"]);
        assert_eq!(a.stats_for(&DivisionLabel::Dev).unwrap().word_count, 15);
        assert_eq!(a.stats_for(&DivisionLabel::Test).unwrap().word_count, 55);
        assert_eq!(a.stats_for(&DivisionLabel::Train).unwrap().word_count, 30);
    }

    #[test]
    fn two_docs_infeasible() {
        let err = split(&manifest(&[("a", 10), ("b", 10)]), &SplitPolicy::default()).unwrap_err();
        assert_eq!(
            err,
            SplitError::Infeasible {
                genre: None,
                dev_docs: 1,
                test_docs: 1,
                total_docs: 2
            }
        );
    }

    #[test]
    fn overlapping_ends_infeasible() {
        // One giant document satisfies both thresholds.
        let err = split(&manifest(&[("a", 1), ("b", 100), ("c", 1)]), &SplitPolicy::default()).unwrap_err();
        assert!(matches!(err, SplitError::Infeasible { dev_docs: 2, test_docs: 2, .. }));
    }

    #[test]
    fn empty_and_invalid_corpora() {
        assert_eq!(
            split(&manifest(&[("a", 0), ("b", 0)]), &SplitPolicy::default()),
            Err(SplitError::EmptyCorpus { genre: None })
        );
        assert_eq!(
            split(&manifest(&[]), &SplitPolicy::default()),
            Err(SplitError::EmptyCorpus { genre: None })
        );
        assert!(matches!(
            split(&manifest(&[("a", 1), ("a", 2)]), &SplitPolicy::default()),
            Err(SplitError::Corpus(CorpusError::DuplicateName(_)))
        ));
        let neg = CorpusManifest::new("n", vec![DocumentRecord::new("a", -3i32), DocumentRecord::new("b", 50)]);
        assert!(matches!(split(&neg, &SplitPolicy::default()), Err(SplitError::Corpus(CorpusError::Invalid(_)))));
    }

    #[test]
    fn zero_word_documents_ride_along() {
        let m = manifest(&[("a", 0), ("b", 0), ("c", 20), ("d", 0), ("e", 60), ("f", 0), ("g", 20), ("h", 0)]);
        let a = split(&m, &SplitPolicy::default()).unwrap();
        assert_eq!(a.members(&DivisionLabel::Dev), ["a", "b", "c"]);
        assert_eq!(a.members(&DivisionLabel::Test), ["g", "h"]);
    }

    #[test]
    fn record_order_is_irrelevant() {
        let mut m = uniform10();
        let a = split(&m, &SplitPolicy::default()).unwrap();
        m.documents.reverse();
        assert_eq!(labels(&a), labels(&split(&m, &SplitPolicy::default()).unwrap()));
    }

    #[test]
    fn policy_bounds() {
        let f = |n, d| Fraction::new(n, d);
        assert!(SplitPolicy::<u64>::new(f(0, 1), f(1, 10)).is_err());
        assert!(SplitPolicy::<u64>::new(f(1, 2), f(1, 2)).is_err());
        assert!(SplitPolicy::<i64>::new(Fraction::new(-1i64, 10), Fraction::new(1, 10)).is_err());
        assert!(SplitPolicy::<u64>::new(f(1, 5), f(3, 10)).is_ok());
    }

    #[test]
    fn uneven_fractions() {
        // 20% DEV, 30% TEST over ten 10-word docs.
        let p = SplitPolicy::new(Fraction::new(1, 5), Fraction::new(3, 10)).unwrap();
        let a = split(&uniform10(), &p).unwrap();
        assert_eq!(a.members(&DivisionLabel::Dev).len(), 3);
        assert_eq!(a.members(&DivisionLabel::Test).len(), 4);
    }

    #[test]
    fn stratified_requires_genre() {
        let mut m = manifest(&[("a", 5), ("b", 5)]);
        m.documents[0].genre = Some("NW".into());
        assert_eq!(
            split_stratified(&m, &SplitPolicy::default()),
            Err(SplitError::MissingGenre("b".into()))
        );
    }

    #[test]
    fn stratified_single_genre_matches_plain() {
        let mut m = uniform10();
        for d in &mut m.documents {
            d.genre = Some("NW".into());
        }
        let parts = split_stratified(&m, &SplitPolicy::default()).unwrap();
        assert_eq!(parts.len(), 1);
        assert_eq!(labels(&parts["NW"]), labels(&split(&m, &SplitPolicy::default()).unwrap()));
    }

    #[test]
    fn stratified_infeasible_is_tagged() {
        let mut m = uniform10();
        m.documents.push(DocumentRecord::new("x1", 5).with_genre("WL"));
        m.documents.push(DocumentRecord::new("x2", 5).with_genre("WL"));
        for d in m.documents.iter_mut().take(10) {
            d.genre = Some("NW".into());
        }
        let err = split_stratified(&m, &SplitPolicy::default()).unwrap_err();
        assert!(matches!(err, SplitError::Infeasible { genre: Some(ref g), .. } if g == "WL"));
        assert!(err.to_string().starts_with("genre WL:"));
    }

    #[test]
    fn carve_takes_front_of_train() {
        let m = uniform10();
        let a = split(&m, &SplitPolicy::default()).unwrap();
        let tune = DivisionLabel::parse("TUNE").unwrap();
        let c = carve_extra(&a, &m, tune.clone(), &Fraction::new(15, 100)).unwrap();
        assert_eq!(c.members(&tune), ["d03", "d04"]);
        assert_eq!(c.members(&DivisionLabel::Dev), a.members(&DivisionLabel::Dev));
        assert_eq!(c.members(&DivisionLabel::Test), a.members(&DivisionLabel::Test));
        assert_eq!(c.stats_for(&DivisionLabel::Train).unwrap().doc_count, 4);
    }

    #[test]
    fn carve_errors() {
        let m = uniform10();
        let a = split(&m, &SplitPolicy::default()).unwrap();
        let tune = DivisionLabel::parse("TUNE").unwrap();
        assert_eq!(
            carve_extra(&a, &m, DivisionLabel::Dev, &Fraction::new(1, 10)),
            Err(SplitError::LabelClash(DivisionLabel::Dev))
        );
        assert!(matches!(
            carve_extra(&a, &m, tune.clone(), &Fraction::new(0, 1)),
            Err(SplitError::InvalidFraction(_))
        ));
        // TRAIN holds 60 words; more than 50 would need all six documents.
        assert_eq!(
            carve_extra(&a, &m, tune.clone(), &Fraction::new(1, 2)),
            Err(SplitError::InsufficientTrain { train_docs: 6 })
        );
        let c = carve_extra(&a, &m, tune.clone(), &Fraction::new(1, 10)).unwrap();
        assert_eq!(
            carve_extra(&c, &m, tune.clone(), &Fraction::new(1, 10)),
            Err(SplitError::LabelClash(tune.clone()))
        );
        let mut other = m.clone();
        other.documents[4].word_count = 11;
        assert_eq!(
            carve_extra(&a, &other, tune, &Fraction::new(1, 10)),
            Err(SplitError::ManifestMismatch)
        );
    }

    #[test]
    fn assignment_tsv() {
        let a = split(&uniform10(), &SplitPolicy::default()).unwrap();
        let text = write_assignment(a.labeling());
        assert!(text.starts_with("d01\tDEV\nd02\tDEV\nd03\tTRAIN\n"));
        assert_eq!(load_assignment(&text).unwrap(), *a.labeling());
        assert!(matches!(
            load_assignment("a\tDEV\na\tTEST\n"),
            Err(IngestError::MalformedLine { line: 2, .. })
        ));
        assert!(matches!(load_assignment("a DEV\n"), Err(IngestError::MalformedLine { line: 1, .. })));
        assert!(matches!(load_assignment("a\t\n"), Err(IngestError::MalformedLine { line: 1, .. })));
    }

    #[test]
    fn genre_labels() {
        let l = DivisionLabel::parse("NW:dev").unwrap();
        assert_eq!(split_genre_label(&l), Some(("NW", DivisionLabel::Dev)));
        assert_eq!(split_genre_label(&DivisionLabel::Train), None);
        assert_eq!(split_genre_label(&DivisionLabel::parse(":DEV").unwrap()), None);
    }

    fn kinds(v: &[SplitViolation]) -> Vec<&'static str> {
        v.iter().map(SplitViolation::kind).collect()
    }

    #[test]
    fn verify_accepts_rule_split() {
        let m = uniform10();
        let p = SplitPolicy::default();
        let a = split(&m, &p).unwrap();
        assert_eq!(verify_split(&m, a.labeling(), &p).unwrap(), vec![]);
    }

    #[test]
    fn verify_names_violations() {
        let m = uniform10();
        let p = SplitPolicy::default();
        let a = split(&m, &p).unwrap();
        let relabel = |name: &str, label: DivisionLabel| -> Labeling {
            a.labeling()
                .iter()
                .map(|(n, l)| (n.to_string(), if n == name { label.clone() } else { l.clone() }))
                .collect()
        };
        let swapped = relabel("d05", DivisionLabel::Dev);
        assert!(kinds(&verify_split(&m, &swapped, &p).unwrap()).contains(&"contiguity"));
        let undersized = relabel("d02", DivisionLabel::Train);
        let v = verify_split(&m, &undersized, &p).unwrap();
        assert!(kinds(&v).contains(&"threshold"), "{v:?}");
        assert!(!kinds(&v).contains(&"contiguity"));
        let oversized = relabel("d08", DivisionLabel::Test);
        assert!(kinds(&verify_split(&m, &oversized, &p).unwrap()).contains(&"minimality"));
        let extra = relabel("d05", DivisionLabel::parse("TUNE").unwrap());
        assert!(kinds(&verify_split(&m, &extra, &p).unwrap()).contains(&"label"));
        let mut partial = Labeling::new();
        partial.insert("d01", DivisionLabel::Dev).unwrap();
        partial.insert("zz", DivisionLabel::Dev).unwrap();
        assert_eq!(kinds(&verify_split(&m, &partial, &p).unwrap()), ["partition", "partition"]);
    }

    #[test]
    fn verify_stratified_roundtrip() {
        let mut m = uniform10();
        for (i, d) in m.documents.iter_mut().enumerate() {
            d.genre = Some(if i % 2 == 0 { "A" } else { "B" }.to_string());
        }
        let more: Vec<_> = (0..10).map(|i| DocumentRecord::new(format!("e{i}"), 7).with_genre(if i % 2 == 0 { "A" } else { "B" })).collect();
        m.documents.extend(more);
        let p = SplitPolicy::default().stratified(true);
        let div = divide(&m, &p).unwrap();
        let l = div.labeling();
        assert!(l.iter().all(|(_, lab)| lab.as_str().starts_with("A:") || lab.as_str().starts_with("B:")));
        assert_eq!(verify_stratified(&m, &l, &p).unwrap(), vec![]);

        let flipped: Labeling = l
            .iter()
            .map(|(n, lab)| {
                let s = lab.as_str().to_string();
                let s = if n == "d01" { s.replacen("A:", "B:", 1) } else { s };
                (n.to_string(), DivisionLabel::parse(&s).unwrap())
            })
            .collect();
        assert!(kinds(&verify_stratified(&m, &flipped, &p).unwrap()).contains(&"genre"));
        assert!(kinds(&verify_stratified(&m, &split(&m, &p).unwrap().into_labeling(), &p).unwrap()).contains(&"label"));
    }
}
