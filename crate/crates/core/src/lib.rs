//! Deterministic TRAIN/DEV/TEST division of document corpora.
//!
//! Documents are sorted by name; DEV takes documents from the front until it
//! holds more than a set share of the corpus words, TEST does the same from
//! the back, and TRAIN gets the rest. No randomness is involved, so a
//! division is fully described by its document ranges.
//!
//! Alongside the splitter the crate ships the published divisions of the LDC
//! Arabic treebanks ([`registry`]) and overlap/contamination analysis between
//! division schemes ([`compat`]).
//!
//! Word arithmetic is generic over the integer count type (see
//! [`WordCount`]); the aliases below fix it to `u64`.

pub mod compat;
pub mod corpus;
pub mod ingest;
pub mod num;
pub mod registry;
pub mod splitter;

pub use compat::{
    compare_assignments, contamination_check, overlap_intervals, test_superset_check, IntervalDivision,
    OverlapReport,
};
pub use corpus::{sort_documents, validate_manifest, DivisionLabel, Labeling};
pub use ingest::{build_manifest, count_words_raw, count_words_tree, load_manifest, parse_trees, write_manifest};
pub use num::WordCount;
pub use registry::{list_reference, registry_selfcheck, resolve_assignment, to_intervals, ReferenceDivision};
pub use splitter::{carve_extra, split, split_stratified, SplitBounds};

pub type DocumentRecord = corpus::DocumentRecord<u64>;
pub type CorpusManifest = corpus::CorpusManifest<u64>;
pub type DivisionAssignment = corpus::DivisionAssignment<u64>;
pub type SplitPolicy = splitter::SplitPolicy<u64>;
pub type Fraction = num::Fraction<u64>;
pub type Division = splitter::Division<u64>;
