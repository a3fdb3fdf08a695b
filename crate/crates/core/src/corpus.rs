//! Documents, manifests, division labels and assignments.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::num::{checked_sum, WordCount};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CorpusError {
    #[error("duplicate document name {0:?}")]
    DuplicateName(String),
    #[error("invalid manifest: {0}")]
    Invalid(Violation),
    #[error("word count total overflows the count type")]
    Overflow,
    #[error("document {0:?} is not in the manifest")]
    UnknownDocument(String),
    #[error("manifest documents without a label: {0:?}")]
    Unlabeled(Vec<String>),
    #[error("invalid label {0:?}")]
    InvalidLabel(String),
}

/// One corpus document: its name and raw word count.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct DocumentRecord<W> {
    pub name: String,
    pub word_count: W,
    pub genre: Option<String>,
}

impl<W: WordCount> DocumentRecord<W> {
    pub fn new(name: impl Into<String>, word_count: W) -> Self {
        DocumentRecord {
            name: name.into(),
            word_count,
            genre: None,
        }
    }

    pub fn with_genre(mut self, genre: impl Into<String>) -> Self {
        self.genre = Some(genre.into());
        self
    }
}

/// True when `s` can be stored in a TSV field.
pub(crate) fn is_tsv_safe(s: &str) -> bool {
    !s.is_empty() && !s.contains(['\t', '\n', '\r'])
}

/// A single invariant violation found by [`validate_manifest`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum Violation {
    EmptyName { index: usize },
    IllegalCharacter { name: String },
    DuplicateName { name: String },
    NegativeCount { name: String },
    InvalidGenre { name: String },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::EmptyName { index } => write!(f, "document #{index} has an empty name"),
            Violation::IllegalCharacter { name } => {
                write!(f, "document {name:?} contains a tab or newline")
            }
            Violation::DuplicateName { name } => write!(f, "document {name:?} appears more than once"),
            Violation::NegativeCount { name } => {
                write!(f, "document {name:?} has a negative word count")
            }
            Violation::InvalidGenre { name } => write!(f, "document {name:?} has an empty or non-TSV-safe genre tag"),
        }
    }
}

/// A named collection of documents.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CorpusManifest<W> {
    pub corpus_id: String,
    pub documents: Vec<DocumentRecord<W>>,
}

impl<W: WordCount> CorpusManifest<W> {
    pub fn new(corpus_id: impl Into<String>, documents: Vec<DocumentRecord<W>>) -> Self {
        CorpusManifest {
            corpus_id: corpus_id.into(),
            documents,
        }
    }

    pub fn len(&self) -> usize {
        self.documents.len()
    }

    pub fn is_empty(&self) -> bool {
        self.documents.is_empty()
    }

    /// Sum of all document word counts.
    pub fn total_word_count(&self) -> Result<W, CorpusError> {
        checked_sum(self.documents.iter().map(|d| d.word_count)).ok_or(CorpusError::Overflow)
    }

    pub fn get(&self, name: &str) -> Option<&DocumentRecord<W>> {
        self.documents.iter().find(|d| d.name == name)
    }

    /// Word counts keyed by document name.
    pub fn word_counts(&self) -> BTreeMap<&str, W> {
        self.documents
            .iter()
            .map(|d| (d.name.as_str(), d.word_count))
            .collect()
    }

    /// Fails on the first violation reported by [`validate_manifest`].
    pub fn ensure_valid(&self) -> Result<(), CorpusError> {
        match validate_manifest(self).into_iter().next() {
            None => Ok(()),
            Some(Violation::DuplicateName { name }) => Err(CorpusError::DuplicateName(name)),
            Some(v) => Err(CorpusError::Invalid(v)),
        }
    }
}

/// Returns the documents in ascending bytewise order of name.
///
/// Names are compared verbatim as UTF-8 bytes; there is no case folding or
/// whitespace normalization.
pub fn sort_documents<W: WordCount>(
    manifest: &CorpusManifest<W>,
) -> Result<Vec<DocumentRecord<W>>, CorpusError> {
    let mut docs = manifest.documents.clone();
    docs.sort_by(|a, b| a.name.as_bytes().cmp(b.name.as_bytes()));
    if let Some(pair) = docs.windows(2).find(|p| p[0].name == p[1].name) {
        return Err(CorpusError::DuplicateName(pair[0].name.clone()));
    }
    Ok(docs)
}

/// Lists every invariant violation in the manifest. An empty result means the
/// manifest is well formed.
pub fn validate_manifest<W: WordCount>(manifest: &CorpusManifest<W>) -> Vec<Violation> {
    let mut out = Vec::new();
    let mut seen = BTreeSet::new();
    let mut reported = BTreeSet::new();
    for (index, doc) in manifest.documents.iter().enumerate() {
        if doc.name.is_empty() {
            out.push(Violation::EmptyName { index });
        } else if !is_tsv_safe(&doc.name) {
            out.push(Violation::IllegalCharacter {
                name: doc.name.clone(),
            });
        }
        if !seen.insert(doc.name.as_str()) && reported.insert(doc.name.as_str()) {
            out.push(Violation::DuplicateName {
                name: doc.name.clone(),
            });
        }
        if doc.word_count < W::zero() {
            out.push(Violation::NegativeCount {
                name: doc.name.clone(),
            });
        }
        if let Some(genre) = &doc.genre {
            if !is_tsv_safe(genre) {
                out.push(Violation::InvalidGenre {
                    name: doc.name.clone(),
                });
            }
        }
    }
    out
}

/// Division label. DEV, TRAIN and TEST are canonical and parsed
/// case-insensitively; anything else is kept verbatim.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum DivisionLabel {
    Dev,
    Train,
    Test,
    Named(String),
}

impl DivisionLabel {
    pub fn parse(s: &str) -> Result<Self, CorpusError> {
        if !is_tsv_safe(s) {
            return Err(CorpusError::InvalidLabel(s.to_string()));
        }
        Ok(match s.to_ascii_uppercase().as_str() {
            "DEV" => DivisionLabel::Dev,
            "TRAIN" => DivisionLabel::Train,
            "TEST" => DivisionLabel::Test,
            _ => DivisionLabel::Named(s.to_string()),
        })
    }

    pub fn is_canonical(&self) -> bool {
        !matches!(self, DivisionLabel::Named(_))
    }

    pub fn as_str(&self) -> &str {
        match self {
            DivisionLabel::Dev => "DEV",
            DivisionLabel::Train => "TRAIN",
            DivisionLabel::Test => "TEST",
            DivisionLabel::Named(s) => s,
        }
    }

    /// Labels whose documents are held out for evaluation.
    pub fn is_evaluation(&self) -> bool {
        match self {
            DivisionLabel::Test => true,
            DivisionLabel::Named(s) => s.eq_ignore_ascii_case("DEVTEST"),
            _ => false,
        }
    }
}

impl fmt::Display for DivisionLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for DivisionLabel {
    type Err = CorpusError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        DivisionLabel::parse(s)
    }
}

impl Serialize for DivisionLabel {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(self.as_str())
    }
}

/// Document name to label, without word counts attached.
///
/// This is what an assignment file holds; it becomes a
/// [`DivisionAssignment`] once checked against a manifest.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Labeling {
    entries: BTreeMap<String, DivisionLabel>,
}

impl Labeling {
    pub fn new() -> Self {
        Self::default()
    }

    /// Adds an entry; a name can be labeled only once.
    pub fn insert(&mut self, name: impl Into<String>, label: DivisionLabel) -> Result<(), CorpusError> {
        let name = name.into();
        if self.entries.contains_key(&name) {
            return Err(CorpusError::DuplicateName(name));
        }
        self.entries.insert(name, label);
        Ok(())
    }

    pub fn get(&self, name: &str) -> Option<&DivisionLabel> {
        self.entries.get(name)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Entries in bytewise name order.
    pub fn iter(&self) -> impl Iterator<Item = (&str, &DivisionLabel)> {
        self.entries.iter().map(|(k, v)| (k.as_str(), v))
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.entries.keys().map(String::as_str)
    }

    /// Distinct labels in order of first appearance along the sorted names.
    pub fn labels(&self) -> Vec<DivisionLabel> {
        let mut out: Vec<DivisionLabel> = Vec::new();
        for label in self.entries.values() {
            if !out.contains(label) {
                out.push(label.clone());
            }
        }
        out
    }

    /// Names carrying `label`, in sorted order.
    pub fn members<'a>(&'a self, label: &'a DivisionLabel) -> impl Iterator<Item = &'a str> + 'a {
        self.entries
            .iter()
            .filter(move |(_, l)| *l == label)
            .map(|(k, _)| k.as_str())
    }

    /// Union of labelings over disjoint name sets, e.g. several treebanks
    /// combined into one evaluation universe.
    pub fn merge<'a>(parts: impl IntoIterator<Item = &'a Labeling>) -> Result<Labeling, CorpusError> {
        let mut out = Labeling::new();
        for part in parts {
            for (name, label) in part.iter() {
                out.insert(name, label.clone())?;
            }
        }
        Ok(out)
    }
}

impl FromIterator<(String, DivisionLabel)> for Labeling {
    /// Later duplicates overwrite earlier ones; use [`Labeling::insert`] to
    /// detect them.
    fn from_iter<I: IntoIterator<Item = (String, DivisionLabel)>>(iter: I) -> Self {
        Labeling {
            entries: iter.into_iter().collect(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct LabelStats<W> {
    pub doc_count: usize,
    pub word_count: W,
}

/// A labeling checked to be a partition of a manifest, with per-label totals.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DivisionAssignment<W> {
    corpus_id: String,
    labeling: Labeling,
    stats: BTreeMap<DivisionLabel, LabelStats<W>>,
}

impl<W: WordCount> DivisionAssignment<W> {
    /// Checks that `labeling` covers exactly the manifest's documents and
    /// computes per-label statistics.
    pub fn from_labeling(
        manifest: &CorpusManifest<W>,
        labeling: Labeling,
    ) -> Result<Self, CorpusError> {
        manifest.ensure_valid()?;
        let counts = manifest.word_counts();
        if let Some(extra) = labeling.names().find(|n| !counts.contains_key(n)) {
            return Err(CorpusError::UnknownDocument(extra.to_string()));
        }
        let missing: Vec<String> = counts
            .keys()
            .filter(|n| labeling.get(n).is_none())
            .map(|n| n.to_string())
            .collect();
        if !missing.is_empty() {
            return Err(CorpusError::Unlabeled(missing));
        }
        let mut stats: BTreeMap<DivisionLabel, LabelStats<W>> = BTreeMap::new();
        for (name, label) in labeling.iter() {
            let entry = stats.entry(label.clone()).or_insert(LabelStats {
                doc_count: 0,
                word_count: W::zero(),
            });
            entry.doc_count += 1;
            entry.word_count = entry
                .word_count
                .checked_add(&counts[name])
                .ok_or(CorpusError::Overflow)?;
        }
        Ok(DivisionAssignment {
            corpus_id: manifest.corpus_id.clone(),
            labeling,
            stats,
        })
    }

    pub fn corpus_id(&self) -> &str {
        &self.corpus_id
    }

    pub fn labeling(&self) -> &Labeling {
        &self.labeling
    }

    pub fn into_labeling(self) -> Labeling {
        self.labeling
    }

    pub fn label_of(&self, name: &str) -> Option<&DivisionLabel> {
        self.labeling.get(name)
    }

    pub fn stats(&self) -> &BTreeMap<DivisionLabel, LabelStats<W>> {
        &self.stats
    }

    pub fn stats_for(&self, label: &DivisionLabel) -> Option<LabelStats<W>> {
        self.stats.get(label).copied()
    }

    /// Sorted names carrying `label`.
    pub fn members(&self, label: &DivisionLabel) -> Vec<&str> {
        self.labeling.iter().filter(|(_, l)| *l == label).map(|(n, _)| n).collect()
    }
}
