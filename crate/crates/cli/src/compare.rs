use std::io::Write;

use corpus_divisions::compat::{contamination_check_labelings, CompatError, IntervalDivision};
use corpus_divisions::registry::schemes;
use corpus_divisions::{
    compare_assignments, contamination_check, list_reference, overlap_intervals, to_intervals, DivisionLabel, Labeling,
    OverlapReport,
};
use serde::Serialize;

use crate::divide::{read_assignment, read_manifest};
use crate::{emit, stem, CliError, CliResult, CompareArgs, EXIT_FAILED, EXIT_OK};

#[derive(Debug, Serialize)]
struct CheckOutput {
    train: String,
    test: String,
    safe: bool,
    shared: usize,
}

#[derive(Serialize)]
struct Combined<'a> {
    report: &'a OverlapReport,
    check: &'a CheckOutput,
}

/// One side of a contamination spec: index into the known names plus label.
type Side = (usize, DivisionLabel);

fn parse_side(s: &str, known: &[String]) -> Option<Side> {
    known
        .iter()
        .enumerate()
        .filter(|(_, k)| {
            s.len() > k.len() + 1 && s.is_char_boundary(k.len()) && s[..k.len()].eq_ignore_ascii_case(k) && s[k.len()..].starts_with('.')
        })
        .max_by_key(|(_, k)| k.len())
        .and_then(|(i, k)| DivisionLabel::parse(&s[k.len() + 1..]).ok().map(|l| (i, l)))
}

/// Parses `SCHEME.LABEL:SCHEME.LABEL`. Labels may themselves contain `:`
/// (stratified `GENRE:LABEL`), so every colon is tried as the separator and
/// exactly one must give two valid sides.
fn parse_check(spec: &str, known: &[String]) -> Result<(Side, Side), CliError> {
    let candidates: Vec<(Side, Side)> = spec
        .match_indices(':')
        .filter_map(|(i, _)| Some((parse_side(&spec[..i], known)?, parse_side(&spec[i + 1..], known)?)))
        .collect();
    match <[_; 1]>::try_from(candidates) {
        Ok([c]) => Ok(c),
        Err(v) if v.is_empty() => Err(CliError::Usage(format!(
            "--check-contamination {spec:?}: expected TRAIN_SCHEME.LABEL:TEST_SCHEME.LABEL with schemes among {}",
            known.join(", ")
        ))),
        Err(_) => Err(CliError::Usage(format!("--check-contamination {spec:?} is ambiguous"))),
    }
}

fn compat_error(e: CompatError) -> CliError {
    CliError::Input(e.to_string())
}

fn intervals(scheme: &str, treebank: &str) -> Result<Vec<IntervalDivision>, CliError> {
    let rows = list_reference(scheme, Some(treebank)).map_err(|e| CliError::Usage(e.to_string()))?;
    to_intervals(&rows).map_err(|e| CliError::Usage(e.to_string()))
}

pub(crate) fn run(args: CompareArgs, out: &mut dyn Write) -> CliResult {
    let mut report: Option<OverlapReport> = None;
    let mut check: Option<CheckOutput> = None;

    if let (Some(pa), Some(pb)) = (&args.assignment_a, &args.assignment_b) {
        if args.treebank.is_some() {
            return Err(CliError::Usage("--treebank applies to registry schemes, not assignment files".into()));
        }
        let la = read_assignment(pa)?;
        let lb = read_assignment(pb)?;
        let (na, nb) = match (stem(pa), stem(pb)) {
            (a, b) if a == b => ("a".to_string(), "b".to_string()),
            pair => pair,
        };
        let manifest = args.manifest.as_deref().map(read_manifest).transpose()?;
        report = Some(compare_assignments(&na, &la, &nb, &lb, manifest.as_ref()).map_err(compat_error)?);
        if let Some(spec) = &args.check_contamination {
            let known = [na, nb];
            let ((ti, tl), (ei, el)) = parse_check(spec, &known)?;
            let pick = |i: usize| -> &Labeling { if i == 0 { &la } else { &lb } };
            let v = contamination_check_labelings(pick(ti), &tl, pick(ei), &el).map_err(compat_error)?;
            check = Some(CheckOutput {
                train: format!("{}.{tl}", known[ti]),
                test: format!("{}.{el}", known[ei]),
                safe: v.safe,
                shared: v.shared,
            });
        }
    } else {
        let Some(treebank) = args.treebank.as_deref() else {
            return Err(CliError::Usage(
                "give --scheme-a/--scheme-b or --check-contamination with --treebank, or --assignment-a/--assignment-b".into(),
            ));
        };
        if let (Some(a), Some(b)) = (&args.scheme_a, &args.scheme_b) {
            let ia = intervals(a, treebank)?;
            let ib = intervals(b, treebank)?;
            report = Some(overlap_intervals(a, &ia, b, &ib).map_err(compat_error)?);
        }
        if let Some(spec) = &args.check_contamination {
            let known: Vec<String> = schemes().iter().map(|s| s.id.to_string()).collect();
            let ((ti, tl), (ei, el)) = parse_check(spec, &known)?;
            let train = intervals(&known[ti], treebank)?;
            let test = intervals(&known[ei], treebank)?;
            let v = contamination_check(&train, &tl, &test, &el).map_err(|e| CliError::Usage(e.to_string()))?;
            check = Some(CheckOutput {
                train: format!("{}.{tl}", known[ti]),
                test: format!("{}.{el}", known[ei]),
                safe: v.safe,
                shared: v.shared,
            });
        }
        if report.is_none() && check.is_none() {
            return Err(CliError::Usage("nothing to compare: give --scheme-a/--scheme-b or --check-contamination".into()));
        }
    }

    let text = if args.json {
        let json = match (&report, &check) {
            (Some(r), Some(c)) => serde_json::to_string_pretty(&Combined { report: r, check: c }),
            (Some(r), None) => serde_json::to_string_pretty(r),
            (None, Some(c)) => serde_json::to_string_pretty(c),
            (None, None) => unreachable!("checked above"),
        }
        .expect("report types serialize");
        json + "\n"
    } else {
        let mut text = report.as_ref().map(OverlapReport::to_text).unwrap_or_default();
        if let Some(c) = &check {
            text.push_str(&format!(
                "contamination {} -> {}: {} ({} shared documents)\n",
                c.train,
                c.test,
                if c.safe { "safe" } else { "UNSAFE" },
                c.shared
            ));
        }
        text
    };
    emit(out, &text)?;
    Ok(match check {
        Some(c) if !c.safe => EXIT_FAILED,
        _ => EXIT_OK,
    })
}
