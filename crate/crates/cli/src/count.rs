use std::collections::BTreeMap;
use std::io::Write;
use std::path::{Path, PathBuf};

use corpus_divisions::corpus::sort_documents;
use corpus_divisions::ingest::{line_col, ContentKind};
use corpus_divisions::{write_manifest, CorpusManifest, DocumentRecord};
use walkdir::WalkDir;

use crate::{emit, read_text, stem, CliError, CliResult, CountArgs, Kind, EXIT_OK};

pub(crate) fn run(args: CountArgs, out: &mut dyn Write) -> CliResult {
    let kind = match args.kind {
        Kind::Raw => ContentKind::Raw,
        Kind::Tree => ContentKind::Tree,
    };
    let genres = match &args.genre_map {
        Some(p) => load_genre_map(p)?,
        None => BTreeMap::new(),
    };
    let mut seen: BTreeMap<String, PathBuf> = BTreeMap::new();
    let mut documents = Vec::new();
    for path in collect_files(&args.inputs)? {
        let name = stem(&path);
        if let Some(first) = seen.get(&name) {
            return Err(CliError::Input(format!(
                "document name {name:?} comes from both {} and {}",
                first.display(),
                path.display()
            )));
        }
        if name.is_empty() || name.contains(['\t', '\n', '\r']) {
            return Err(CliError::Input(format!("{}: unusable document name {name:?}", path.display())));
        }
        let text = read_text(&path)?;
        let words = kind.count(&text).map_err(|e| {
            let (line, col) = line_col(&text, e.offset());
            CliError::Input(format!("{}:{line}:{col}: {e}", path.display()))
        })?;
        let mut record = DocumentRecord::new(name.clone(), words as u64);
        record.genre = genres.get(&name).cloned();
        documents.push(record);
        seen.insert(name, path);
    }
    let manifest = CorpusManifest::new("count", documents);
    let sorted = sort_documents(&manifest).map_err(|e| CliError::Input(e.to_string()))?;
    emit(out, &write_manifest(&CorpusManifest::new("count", sorted)))?;
    Ok(EXIT_OK)
}

/// Regular files under the inputs, directories walked in name order.
fn collect_files(inputs: &[PathBuf]) -> Result<Vec<PathBuf>, CliError> {
    let mut files = Vec::new();
    for input in inputs {
        if input.is_dir() {
            for entry in WalkDir::new(input).sort_by_file_name() {
                let entry = entry.map_err(|e| CliError::Input(format!("{}: {e}", input.display())))?;
                if entry.file_type().is_file() {
                    files.push(entry.into_path());
                }
            }
        } else if input.is_file() {
            files.push(input.clone());
        } else {
            return Err(CliError::Input(format!("{}: no such file or directory", input.display())));
        }
    }
    Ok(files)
}

fn load_genre_map(path: &Path) -> Result<BTreeMap<String, String>, CliError> {
    let text = read_text(path)?;
    let mut map = BTreeMap::new();
    for (i, line) in text.lines().enumerate() {
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let bad = |why: &str| CliError::Input(format!("{}:{}: {why}", path.display(), i + 1));
        let Some((name, genre)) = line.split_once('\t') else {
            return Err(bad("expected name<TAB>genre"));
        };
        if name.is_empty() || genre.is_empty() || genre.contains('\t') {
            return Err(bad("expected name<TAB>genre"));
        }
        if map.insert(name.to_string(), genre.to_string()).is_some() {
            return Err(bad(&format!("{name:?} listed twice")));
        }
    }
    Ok(map)
}
