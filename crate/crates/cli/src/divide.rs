use std::io::Write;
use std::path::Path;

use corpus_divisions::splitter::{divide, load_assignment, verify_split, verify_stratified, write_assignment, SplitError};
use corpus_divisions::{load_manifest, CorpusManifest, Labeling, SplitPolicy};

use crate::{emit, parse_fraction, read_text, stem, CliError, CliResult, Fractions, SplitArgs, VerifyArgs, EXIT_FAILED, EXIT_OK};

pub(crate) fn read_manifest(path: &Path) -> Result<CorpusManifest, CliError> {
    let text = read_text(path)?;
    load_manifest(&stem(path), &text).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

pub(crate) fn read_assignment(path: &Path) -> Result<Labeling, CliError> {
    let text = read_text(path)?;
    load_assignment(&text).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

fn policy(f: &Fractions) -> Result<SplitPolicy, CliError> {
    let dev = parse_fraction(&f.dev_frac).map_err(|e| CliError::Usage(format!("--dev-frac: {e}")))?;
    let test = parse_fraction(&f.test_frac).map_err(|e| CliError::Usage(format!("--test-frac: {e}")))?;
    SplitPolicy::new(dev, test)
        .map(|p| p.stratified(f.stratify))
        .map_err(|e| CliError::Usage(e.to_string()))
}

pub(crate) fn split(args: SplitArgs, out: &mut dyn Write) -> CliResult {
    let policy = policy(&args.fractions)?;
    let manifest = read_manifest(&args.manifest)?;
    match divide(&manifest, &policy) {
        Ok(division) => {
            emit(out, &write_assignment(&division.labeling()))?;
            Ok(EXIT_OK)
        }
        Err(e @ (SplitError::Infeasible { .. } | SplitError::EmptyCorpus { .. })) => Err(CliError::Failed(e.to_string())),
        Err(e) => Err(CliError::Input(format!("{}: {e}", args.manifest.display()))),
    }
}

pub(crate) fn verify(args: VerifyArgs, out: &mut dyn Write) -> CliResult {
    let policy = policy(&args.fractions)?;
    let manifest = read_manifest(&args.manifest)?;
    let labeling = read_assignment(&args.assignment)?;
    let found = if policy.stratify_by_genre {
        verify_stratified(&manifest, &labeling, &policy)
    } else {
        verify_split(&manifest, &labeling, &policy)
    }
    .map_err(|e| CliError::Input(e.to_string()))?;
    let mut report = String::new();
    for v in &found {
        report.push_str(&format!("{}: {v}\n", v.kind()));
    }
    if found.is_empty() {
        report.push_str(&format!("ok: {} documents match the division rule\n", labeling.len()));
        emit(out, &report)?;
        Ok(EXIT_OK)
    } else {
        report.push_str(&format!("failed: {} violation(s)\n", found.len()));
        emit(out, &report)?;
        Ok(EXIT_FAILED)
    }
}
