use std::io::Write;

use corpus_divisions::registry::{
    export_meta, export_rows, meta_for, reference_rows, schemes, treebank_meta, treebanks, RegistryError, RULE_SCHEME,
};
use corpus_divisions::{list_reference, registry_selfcheck, ReferenceDivision};

use crate::{emit, CliError, CliResult, RegistryAction, Selector, EXIT_FAILED, EXIT_OK};

fn lookup(e: RegistryError) -> CliError {
    CliError::Usage(e.to_string())
}

fn select(sel: &Selector, default_scheme: Option<&str>) -> Result<Vec<ReferenceDivision>, CliError> {
    match sel.scheme.as_deref().or(default_scheme) {
        Some(scheme) => list_reference(scheme, sel.treebank.as_deref()).map_err(lookup),
        None => {
            let rows: Vec<_> = reference_rows()
                .iter()
                .filter(|r| sel.treebank.as_deref().is_none_or(|t| r.treebank.eq_ignore_ascii_case(t)))
                .cloned()
                .collect();
            match &sel.treebank {
                Some(t) if rows.is_empty() => Err(CliError::Usage(format!("no scheme has treebank {t:?}"))),
                _ => Ok(rows),
            }
        }
    }
}

pub(crate) fn run(action: RegistryAction, out: &mut dyn Write) -> CliResult {
    match action {
        RegistryAction::List { scheme: None } => {
            let mut text = String::new();
            for s in schemes() {
                let tbs = treebanks(s.id).map_err(lookup)?;
                let tbs = if tbs.is_empty() { "-".to_string() } else { tbs.join(",") };
                text.push_str(&format!("{}\t{}\t{}\n", s.id, tbs, s.note));
            }
            emit(out, &text)?;
        }
        RegistryAction::List { scheme: Some(scheme) } => {
            let mut text = String::new();
            for tb in treebanks(&scheme).map_err(lookup)? {
                match meta_for(tb) {
                    Some(m) => text.push_str(&format!("{tb}\t{}\t{}\n", m.version, m.ldc_catalog)),
                    None => text.push_str(&format!("{tb}\t-\t-\n")),
                }
            }
            emit(out, &text)?;
        }
        RegistryAction::Show(sel) => emit(out, &table(&select(&sel, Some(RULE_SCHEME))?))?,
        RegistryAction::Export { selector, meta: true } => {
            let all = treebank_meta();
            let picked: Vec<_> = match &selector.treebank {
                Some(t) => all.into_iter().filter(|m| m.treebank.eq_ignore_ascii_case(t)).collect(),
                None => all,
            };
            if picked.is_empty() {
                return Err(CliError::Usage(format!("no metadata for treebank {:?}", selector.treebank.unwrap_or_default())));
            }
            emit(out, &export_meta(&picked))?;
        }
        RegistryAction::Export { selector, meta: false } => emit(out, &export_rows(&select(&selector, None)?))?,
        RegistryAction::Selfcheck => {
            let report = registry_selfcheck();
            let mut text = String::new();
            for f in &report.failures {
                text.push_str(&format!("FAIL {f}\n"));
            }
            for n in &report.notes {
                text.push_str(&format!("note {n}\n"));
            }
            text.push_str(&format!(
                "{} checks, {} failures\n",
                report.checks,
                report.failures.len()
            ));
            emit(out, &text)?;
            return Ok(if report.passed() { EXIT_OK } else { EXIT_FAILED });
        }
    }
    Ok(EXIT_OK)
}

fn table(rows: &[ReferenceDivision]) -> String {
    let header = ["SCHEME", "TREEBANK", "LABEL", "DOCS", "WORDS", "FIRST", "LAST"].map(String::from);
    let mut cells = vec![header.to_vec()];
    for r in rows {
        cells.push(vec![
            r.scheme.clone(),
            r.treebank.clone(),
            r.label.to_string(),
            r.n_docs.to_string(),
            r.n_words.to_string(),
            r.first_doc.clone(),
            r.last_doc.clone(),
        ]);
    }
    let widths: Vec<usize> = (0..header.len())
        .map(|c| cells.iter().map(|row| row[c].chars().count()).max().unwrap_or(0))
        .collect();
    let mut text = String::new();
    for row in cells {
        let line: Vec<String> = row
            .iter()
            .zip(&widths)
            .enumerate()
            .map(|(c, (cell, w))| if (3..5).contains(&c) { format!("{cell:>w$}") } else { format!("{cell:<w$}") })
            .collect();
        text.push_str(line.join("  ").trim_end());
        text.push('\n');
    }
    text
}
