//! Embedded reference divisions for the LDC Arabic treebanks.
//!
//! Three range-based schemes are stored: `10-80-10` (every treebank, with
//! ATB6 kept as three genre sub-treebanks), `zitouni` (ATB3) and `mada`
//! (ATB1-3). Each row names the first and last document of a contiguous
//! range in the name-sorted document list. The `jhu-stanford` scheme has no
//! rows because its DEVTEST was drawn at random; compare it through
//! explicit file lists instead.

mod data;

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::sync::OnceLock;

use serde::Serialize;
use thiserror::Error;

use crate::compat::IntervalDivision;
use crate::corpus::{sort_documents, CorpusError, CorpusManifest, DivisionAssignment, DivisionLabel, Labeling};
use crate::num::{exceeds, Fraction, WordCount};

pub const RULE_SCHEME: &str = "10-80-10";
pub const ZITOUNI_SCHEME: &str = "zitouni";
pub const MADA_SCHEME: &str = "mada";
pub const JHU_SCHEME: &str = "jhu-stanford";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RegistryError {
    #[error("unknown scheme {0:?}")]
    UnknownScheme(String),
    #[error("scheme {scheme} has no treebank {treebank:?}")]
    UnknownTreebank { scheme: String, treebank: String },
    #[error("rows do not describe one complete scheme: {0}")]
    IncompleteScheme(String),
    #[error("boundary document {0:?} is not in the manifest")]
    BoundaryNotFound(String),
    #[error("ranges overlap or leave gaps: {0}")]
    RangesOverlapOrGap(String),
    #[error("{label}: expected {expected} {what}, found {actual}")]
    CountMismatch {
        label: DivisionLabel,
        what: &'static str,
        expected: u64,
        actual: u64,
    },
    #[error(transparent)]
    Corpus(#[from] CorpusError),
}

/// Compile-time form of a table row.
pub(crate) struct RowSpec {
    scheme: &'static str,
    treebank: &'static str,
    label: &'static str,
    n_docs: u32,
    n_words: u64,
    first_doc: &'static str,
    last_doc: &'static str,
}

impl RowSpec {
    const fn new(
        scheme: &'static str,
        treebank: &'static str,
        label: &'static str,
        n_docs: u32,
        n_words: u64,
        first_doc: &'static str,
        last_doc: &'static str,
    ) -> Self {
        RowSpec {
            scheme,
            treebank,
            label,
            n_docs,
            n_words,
            first_doc,
            last_doc,
        }
    }
}

/// One published division: label, size, and document range.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ReferenceDivision {
    pub scheme: String,
    pub treebank: String,
    pub label: DivisionLabel,
    pub n_docs: u32,
    pub n_words: u64,
    pub first_doc: String,
    pub last_doc: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TreebankMeta {
    pub treebank: String,
    pub version: String,
    pub ldc_catalog: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SchemeInfo {
    pub id: &'static str,
    pub has_ranges: bool,
    pub note: &'static str,
}

static SCHEMES: &[SchemeInfo] = &[
    SchemeInfo {
        id: RULE_SCHEME,
        has_ranges: true,
        note: "DEV = shortest prefix over 10% of words, TEST = shortest suffix over 10%, TRAIN = rest",
    },
    SchemeInfo {
        id: ZITOUNI_SCHEME,
        has_ranges: true,
        note: "ATB3 only: first 509 documents TRAIN, remainder DEVTEST",
    },
    SchemeInfo {
        id: MADA_SCHEME,
        has_ranges: true,
        note: "ATB1 and ATB2 wholly TRAIN; ATB3 Zitouni TRAIN with DEVTEST halved into DEV and TEST",
    },
    SchemeInfo {
        id: JHU_SCHEME,
        has_ranges: false,
        note: "ATB1-3 combined; DEVTEST chosen at random, so no ranges; compare using the published file lists",
    },
];

pub fn schemes() -> &'static [SchemeInfo] {
    SCHEMES
}

/// Every embedded row, in table order.
pub fn reference_rows() -> &'static [ReferenceDivision] {
    static ROWS: OnceLock<Vec<ReferenceDivision>> = OnceLock::new();
    ROWS.get_or_init(|| {
        data::ROWS
            .iter()
            .map(|r| ReferenceDivision {
                scheme: r.scheme.to_string(),
                treebank: r.treebank.to_string(),
                label: DivisionLabel::parse(r.label).expect("embedded labels are valid"),
                n_docs: r.n_docs,
                n_words: r.n_words,
                first_doc: r.first_doc.to_string(),
                last_doc: r.last_doc.to_string(),
            })
            .collect()
    })
}

pub fn treebank_meta() -> Vec<TreebankMeta> {
    data::TREEBANKS
        .iter()
        .map(|(t, v, c)| TreebankMeta {
            treebank: t.to_string(),
            version: v.to_string(),
            ldc_catalog: c.to_string(),
        })
        .collect()
}

/// Metadata for a treebank; genre sub-treebanks such as `ATB6/NW` resolve
/// to their parent release.
pub fn meta_for(treebank: &str) -> Option<TreebankMeta> {
    let base = treebank.split('/').next().unwrap_or(treebank);
    treebank_meta().into_iter().find(|m| m.treebank.eq_ignore_ascii_case(base))
}

/// Treebanks with rows under `scheme`, in table order.
pub fn treebanks(scheme: &str) -> Result<Vec<&'static str>, RegistryError> {
    let scheme = known_scheme(scheme)?;
    let mut out: Vec<&'static str> = Vec::new();
    for r in reference_rows().iter().filter(|r| r.scheme == scheme) {
        if !out.contains(&r.treebank.as_str()) {
            out.push(r.treebank.as_str());
        }
    }
    Ok(out)
}

fn known_scheme(scheme: &str) -> Result<&'static str, RegistryError> {
    SCHEMES
        .iter()
        .find(|s| s.id.eq_ignore_ascii_case(scheme))
        .map(|s| s.id)
        .ok_or_else(|| RegistryError::UnknownScheme(scheme.to_string()))
}

/// Rows of `scheme`, optionally restricted to one treebank (matched
/// case-insensitively).
pub fn list_reference(scheme: &str, treebank: Option<&str>) -> Result<Vec<ReferenceDivision>, RegistryError> {
    let id = known_scheme(scheme)?;
    let rows: Vec<ReferenceDivision> = reference_rows()
        .iter()
        .filter(|r| r.scheme == id)
        .filter(|r| treebank.is_none_or(|t| r.treebank.eq_ignore_ascii_case(t)))
        .cloned()
        .collect();
    match treebank {
        Some(t) if rows.is_empty() => Err(RegistryError::UnknownTreebank {
            scheme: id.to_string(),
            treebank: t.to_string(),
        }),
        _ => Ok(rows),
    }
}

fn check_single_scheme(rows: &[ReferenceDivision]) -> Result<(), RegistryError> {
    let Some(first) = rows.first() else {
        return Err(RegistryError::IncompleteScheme("no rows".into()));
    };
    for r in rows {
        if r.scheme != first.scheme || r.treebank != first.treebank {
            return Err(RegistryError::IncompleteScheme(format!(
                "mixes {}/{} with {}/{}",
                first.scheme, first.treebank, r.scheme, r.treebank
            )));
        }
        if r.n_docs == 0 {
            return Err(RegistryError::IncompleteScheme(format!("{} has no documents", r.label)));
        }
    }
    for (i, r) in rows.iter().enumerate() {
        if rows[..i].iter().any(|o| o.label == r.label) {
            return Err(RegistryError::IncompleteScheme(format!("label {} repeated", r.label)));
        }
    }
    for pair in rows.windows(2) {
        if pair[0].last_doc.as_bytes() >= pair[1].first_doc.as_bytes() {
            return Err(RegistryError::IncompleteScheme(format!(
                "{} ends at {} which does not precede {} starting at {}",
                pair[0].label, pair[0].last_doc, pair[1].label, pair[1].first_doc
            )));
        }
    }
    Ok(())
}

/// Turns the document counts of one scheme's rows into consecutive
/// half-open intervals starting at 0.
pub fn to_intervals(rows: &[ReferenceDivision]) -> Result<Vec<IntervalDivision>, RegistryError> {
    check_single_scheme(rows)?;
    let mut start = 0usize;
    rows.iter()
        .map(|r| {
            let end = start + r.n_docs as usize;
            let d = IntervalDivision {
                label: r.label.clone(),
                start,
                end,
            };
            start = end;
            Ok(d)
        })
        .collect()
}

/// Applies published ranges to a concrete manifest.
///
/// Every document whose name falls inside a row's `[first_doc, last_doc]`
/// range (bytewise, inclusive) gets that row's label. The result is then
/// checked in order: every document covered exactly once, per-row document
/// and word counts as printed, and both boundary documents present. A
/// count mismatch usually means the manifest comes from a different release
/// of the treebank.
pub fn resolve_assignment<W: WordCount>(
    manifest: &CorpusManifest<W>,
    rows: &[ReferenceDivision],
) -> Result<DivisionAssignment<W>, RegistryError> {
    check_single_scheme(rows)?;
    manifest.ensure_valid()?;
    let docs = sort_documents(manifest)?;
    let mut labeling = Labeling::new();
    let mut per_row: Vec<(u64, u64)> = vec![(0, 0); rows.len()];
    for doc in &docs {
        let name = doc.name.as_bytes();
        let mut hits = rows
            .iter()
            .enumerate()
            .filter(|(_, r)| r.first_doc.as_bytes() <= name && name <= r.last_doc.as_bytes());
        let Some((i, row)) = hits.next() else {
            return Err(RegistryError::RangesOverlapOrGap(format!(
                "{} lies outside every range",
                doc.name
            )));
        };
        if let Some((_, other)) = hits.next() {
            return Err(RegistryError::RangesOverlapOrGap(format!(
                "{} lies in both {} and {}",
                doc.name, row.label, other.label
            )));
        }
        let words = doc
            .word_count
            .to_u64()
            .ok_or(RegistryError::Corpus(CorpusError::Overflow))?;
        per_row[i].0 += 1;
        per_row[i].1 += words;
        labeling.insert(doc.name.clone(), row.label.clone())?;
    }
    for (row, (n_docs, n_words)) in rows.iter().zip(&per_row) {
        if *n_docs != u64::from(row.n_docs) {
            return Err(RegistryError::CountMismatch {
                label: row.label.clone(),
                what: "documents",
                expected: row.n_docs.into(),
                actual: *n_docs,
            });
        }
        if *n_words != row.n_words {
            return Err(RegistryError::CountMismatch {
                label: row.label.clone(),
                what: "words",
                expected: row.n_words,
                actual: *n_words,
            });
        }
    }
    for row in rows {
        for boundary in [&row.first_doc, &row.last_doc] {
            if labeling.get(boundary).is_none() {
                return Err(RegistryError::BoundaryNotFound(boundary.clone()));
            }
        }
    }
    Ok(DivisionAssignment::from_labeling(manifest, labeling)?)
}

/// Result of [`selfcheck`]: hard failures plus informational notes.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct SelfCheckReport {
    pub checks: usize,
    pub failures: Vec<String>,
    pub notes: Vec<String>,
}

impl SelfCheckReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checks += 1;
        if !ok {
            self.failures.push(what());
        }
    }
}

/// Runs [`selfcheck`] over the embedded tables.
pub fn registry_selfcheck() -> SelfCheckReport {
    selfcheck(reference_rows(), &treebank_meta())
}

fn group(rows: &[ReferenceDivision]) -> BTreeMap<(&str, &str), Vec<&ReferenceDivision>> {
    let mut out: BTreeMap<(&str, &str), Vec<&ReferenceDivision>> = BTreeMap::new();
    for r in rows {
        out.entry((r.scheme.as_str(), r.treebank.as_str())).or_default().push(r);
    }
    out
}

fn totals(rows: &[&ReferenceDivision]) -> (u64, u64) {
    rows.iter()
        .fold((0, 0), |(d, w), r| (d + u64::from(r.n_docs), w + r.n_words))
}

fn expected_order(scheme: &str, treebank: &str) -> &'static [&'static str] {
    match (scheme, treebank) {
        (RULE_SCHEME, _) => &["DEV", "TRAIN", "TEST"],
        (ZITOUNI_SCHEME, _) => &["TRAIN", "DEVTEST"],
        (MADA_SCHEME, "ATB3") => &["TRAIN", "DEV", "TEST"],
        (MADA_SCHEME, _) => &["TRAIN"],
        _ => &[],
    }
}

fn is_catalog_number(s: &str) -> bool {
    let Some(rest) = s.strip_prefix("LDC") else { return false };
    let bytes = rest.as_bytes();
    bytes.len() > 5
        && bytes[..4].iter().all(u8::is_ascii_digit)
        && bytes[4].is_ascii_uppercase()
        && bytes[5..].iter().all(u8::is_ascii_digit)
}

/// `(stem, n)` for names ending in `.<digits>`.
fn numbered(name: &str) -> Option<(&str, u64)> {
    let (stem, suffix) = name.rsplit_once('.')?;
    Some((stem, suffix.parse().ok()?))
}

/// Arithmetic and ordering consistency of a set of reference rows.
///
/// Checks per-row sanity, row order within each scheme, the strict 10%
/// thresholds of every `10-80-10` DEV and TEST row, and the identities that
/// tie the other schemes to the same corpora.
pub fn selfcheck(rows: &[ReferenceDivision], meta: &[TreebankMeta]) -> SelfCheckReport {
    let mut report = SelfCheckReport::default();
    let groups = group(rows);
    let tenth = Fraction::new(1u64, 10);

    for m in meta {
        report.check(is_catalog_number(&m.ldc_catalog), || {
            format!("{}: catalog number {:?} is malformed", m.treebank, m.ldc_catalog)
        });
    }

    for ((scheme, treebank), rs) in &groups {
        let key = format!("{scheme} {treebank}");
        for r in rs {
            report.check(r.n_docs > 0 && r.n_words > 0, || format!("{key} {}: empty row", r.label));
            report.check(r.first_doc.as_bytes() <= r.last_doc.as_bytes(), || {
                format!("{key} {}: first document sorts after last", r.label)
            });
        }
        let order: Vec<&str> = rs.iter().map(|r| r.label.as_str()).collect();
        report.check(order == expected_order(scheme, treebank), || {
            format!("{key}: rows in order {order:?}")
        });
        for pair in rs.windows(2) {
            report.check(pair[0].last_doc.as_bytes() < pair[1].first_doc.as_bytes(), || {
                format!("{key}: {} and {} ranges are not in sorted order", pair[0].label, pair[1].label)
            });
            if let (Some((s0, n0)), Some((s1, n1))) = (numbered(&pair[0].last_doc), numbered(&pair[1].first_doc)) {
                if s0 == s1 && n1 > n0 + 1 {
                    report.notes.push(format!(
                        "{key}: {} ends at {} and {} starts at {}; numbers in between are unaccounted for",
                        pair[0].label, pair[0].last_doc, pair[1].label, pair[1].first_doc
                    ));
                }
            }
        }
        if *scheme == RULE_SCHEME {
            let (_, total) = totals(rs);
            for r in rs.iter().filter(|r| matches!(r.label, DivisionLabel::Dev | DivisionLabel::Test)) {
                report.check(exceeds(r.n_words, &tenth, total) == Some(true), || {
                    format!("{key} {}: {} words does not exceed 10% of {total}", r.label, r.n_words)
                });
            }
        }
    }

    let get = |scheme: &str, treebank: &str| groups.get(&(scheme, treebank)).cloned().unwrap_or_default();
    let rule3 = totals(&get(RULE_SCHEME, "ATB3"));
    report.check(totals(&get(ZITOUNI_SCHEME, "ATB3")) == rule3, || {
        format!("zitouni ATB3 totals differ from 10-80-10 ATB3 {rule3:?}")
    });
    report.check(totals(&get(MADA_SCHEME, "ATB3")) == rule3, || {
        format!("mada ATB3 totals differ from 10-80-10 ATB3 {rule3:?}")
    });
    for tb in ["ATB1", "ATB2"] {
        let rule = totals(&get(RULE_SCHEME, tb));
        report.check(totals(&get(MADA_SCHEME, tb)) == rule, || {
            format!("mada {tb} TRAIN differs from the 10-80-10 {tb} sums {rule:?}")
        });
    }
    let find = |scheme: &str, label: &str| {
        get(scheme, "ATB3")
            .into_iter()
            .find(|r| r.label.as_str().eq_ignore_ascii_case(label))
    };
    let mada_eval: u64 = ["DEV", "TEST"]
        .iter()
        .filter_map(|l| find(MADA_SCHEME, l))
        .map(|r| u64::from(r.n_docs))
        .sum();
    let devtest = find(ZITOUNI_SCHEME, "DEVTEST").map(|r| u64::from(r.n_docs));
    report.check(devtest == Some(mada_eval), || {
        format!("mada ATB3 DEV+TEST ({mada_eval} docs) differs from zitouni DEVTEST {devtest:?}")
    });
    let same_train = match (find(ZITOUNI_SCHEME, "TRAIN"), find(MADA_SCHEME, "TRAIN")) {
        (Some(z), Some(m)) => z.n_docs == m.n_docs && z.n_words == m.n_words && z.first_doc == m.first_doc && z.last_doc == m.last_doc,
        _ => false,
    };
    report.check(same_train, || "mada ATB3 TRAIN differs from zitouni TRAIN".to_string());

    let qtr: Vec<&str> = rows
        .iter()
        .filter(|r| r.first_doc.ends_with(".qtr") || r.last_doc.ends_with(".qtr"))
        .map(|r| r.treebank.as_str())
        .collect();
    if !qtr.is_empty() {
        let mut qtr = qtr;
        qtr.dedup();
        report.notes.push(format!(
            "{} spell the suffix \".qtr\" where other treebanks use \".qrtr\"; kept as printed",
            qtr.join(", ")
        ));
    }
    report
        .notes
        .push(format!("{JHU_SCHEME}: no ranges stored; its DEVTEST is not a contiguous range"));
    report
}

/// Full row table as TSV, preceded by a `#` header line.
pub fn export_rows(rows: &[ReferenceDivision]) -> String {
    let mut out = String::from("# scheme\ttreebank\tlabel\tn_docs\tn_words\tfirst_doc\tlast_doc\n");
    for r in rows {
        let _ = writeln!(
            out,
            "{}\t{}\t{}\t{}\t{}\t{}\t{}",
            r.scheme, r.treebank, r.label, r.n_docs, r.n_words, r.first_doc, r.last_doc
        );
    }
    out
}

pub fn export_meta(meta: &[TreebankMeta]) -> String {
    let mut out = String::from("# treebank\tversion\tcatalog\n");
    for m in meta {
        let _ = writeln!(out, "{}\t{}\t{}", m.treebank, m.version, m.ldc_catalog);
    }
    out
}
