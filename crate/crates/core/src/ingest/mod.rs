//! Building manifests from raw text, bracketed trees, or manifest TSV.

mod tree;

use std::collections::BTreeMap;
use std::fmt::Write as _;

use thiserror::Error;

pub use tree::{line_col, parse_trees, Tree, TreeError, TreeToken, EMPTY_CATEGORY_TAG};

use crate::corpus::{is_tsv_safe, sort_documents, CorpusError, CorpusManifest, DocumentRecord};
use crate::num::WordCount;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum IngestError {
    #[error("{name}: {source}")]
    Tree { name: String, source: TreeError },
    #[error("{0}: word count does not fit the count type")]
    Overflow(String),
    #[error("duplicate document name {0:?}")]
    DuplicateName(String),
    #[error("{0:?} is not a valid document name")]
    InvalidName(String),
    #[error("line {line}: {reason}")]
    MalformedLine { line: usize, reason: String },
}

impl From<CorpusError> for IngestError {
    fn from(e: CorpusError) -> Self {
        match e {
            CorpusError::DuplicateName(n) => IngestError::DuplicateName(n),
            other => IngestError::InvalidName(other.to_string()),
        }
    }
}

/// Number of maximal runs of non-whitespace characters.
pub fn count_words_raw(text: &str) -> usize {
    text.split_whitespace().count()
}

/// Number of leaves across all trees, not counting empty categories.
pub fn count_words_tree(text: &str) -> Result<usize, TreeError> {
    Ok(parse_trees(text)?
        .iter()
        .flat_map(Tree::tokens)
        .filter(|t| !t.is_empty_category)
        .count())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ContentKind {
    Raw,
    Tree,
}

impl ContentKind {
    pub fn count(self, text: &str) -> Result<usize, TreeError> {
        match self {
            ContentKind::Raw => Ok(count_words_raw(text)),
            ContentKind::Tree => count_words_tree(text),
        }
    }
}

#[derive(Debug, Clone)]
pub struct SourceDocument {
    pub name: String,
    pub content: String,
    pub kind: ContentKind,
}

impl SourceDocument {
    pub fn new(name: impl Into<String>, content: impl Into<String>, kind: ContentKind) -> Self {
        SourceDocument {
            name: name.into(),
            content: content.into(),
            kind,
        }
    }
}

/// Counts every input and assembles a manifest sorted by document name.
///
/// Genres are attached from `genre_map` where present; map entries for
/// names not among the inputs are ignored.
pub fn build_manifest<W: WordCount>(
    corpus_id: &str,
    inputs: &[SourceDocument],
    genre_map: Option<&BTreeMap<String, String>>,
) -> Result<CorpusManifest<W>, IngestError> {
    let mut documents = Vec::with_capacity(inputs.len());
    for input in inputs {
        if !is_tsv_safe(&input.name) {
            return Err(IngestError::InvalidName(input.name.clone()));
        }
        let n = input.kind.count(&input.content).map_err(|source| IngestError::Tree {
            name: input.name.clone(),
            source,
        })?;
        let word_count = W::from_usize(n).ok_or_else(|| IngestError::Overflow(input.name.clone()))?;
        documents.push(DocumentRecord {
            name: input.name.clone(),
            word_count,
            genre: genre_map.and_then(|m| m.get(&input.name).cloned()),
        });
    }
    let unsorted = CorpusManifest::new(corpus_id, documents);
    let documents = sort_documents(&unsorted)?;
    Ok(CorpusManifest::new(corpus_id, documents))
}

fn malformed(line: usize, reason: impl Into<String>) -> IngestError {
    IngestError::MalformedLine {
        line,
        reason: reason.into(),
    }
}

/// Parses manifest TSV: `name<TAB>word_count[<TAB>genre]` per line.
///
/// Lines starting with `#` and blank lines are skipped. Record order is
/// preserved.
pub fn load_manifest<W: WordCount>(corpus_id: &str, tsv: &str) -> Result<CorpusManifest<W>, IngestError> {
    let mut documents: Vec<DocumentRecord<W>> = Vec::new();
    let mut lines_by_name: BTreeMap<String, usize> = BTreeMap::new();
    for (idx, line) in tsv.lines().enumerate() {
        let line_no = idx + 1;
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = line.split('\t').collect();
        let (name, count, genre) = match fields.as_slice() {
            [name, count] => (*name, *count, None),
            [name, count, genre] => (*name, *count, Some(*genre)),
            _ => return Err(malformed(line_no, format!("expected 2 or 3 fields, found {}", fields.len()))),
        };
        if !is_tsv_safe(name) {
            return Err(malformed(line_no, "empty document name"));
        }
        if !count.bytes().all(|b| b.is_ascii_digit() || b == b'-') || count.is_empty() {
            return Err(malformed(line_no, format!("word count {count:?} is not an integer")));
        }
        let word_count: W = count
            .parse()
            .map_err(|_| malformed(line_no, format!("word count {count:?} is not representable")))?;
        let genre = match genre {
            Some(g) if !is_tsv_safe(g) => return Err(malformed(line_no, "empty genre field")),
            g => g.map(str::to_string),
        };
        if let Some(first) = lines_by_name.insert(name.to_string(), line_no) {
            return Err(malformed(
                line_no,
                format!("duplicate document name {name:?} (first seen on line {first})"),
            ));
        }
        documents.push(DocumentRecord {
            name: name.to_string(),
            word_count,
            genre,
        });
    }
    Ok(CorpusManifest::new(corpus_id, documents))
}

/// Serializes a manifest as TSV in its stored record order.
pub fn write_manifest<W: WordCount>(manifest: &CorpusManifest<W>) -> String {
    let mut out = String::new();
    for doc in &manifest.documents {
        let _ = write!(out, "{}\t{}", doc.name, doc.word_count);
        if let Some(g) = &doc.genre {
            out.push('\t');
            out.push_str(g);
        }
        out.push('\n');
    }
    out
}
