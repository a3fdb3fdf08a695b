//! Command-line front end for `corpus-divisions`.
//!
//! [`run`] takes the argument list and output streams explicitly so the
//! whole tool can be driven in-process from tests.

mod compare;
mod count;
mod divide;
mod fraction;
mod registry;

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use thiserror::Error;

pub use fraction::parse_fraction;

/// Exit status for a successful run.
pub const EXIT_OK: i32 = 0;
/// Exit status when checks ran and found violations.
pub const EXIT_FAILED: i32 = 1;
/// Exit status for usage, I/O and parse errors.
pub const EXIT_ERROR: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "corpus-divisions", version, about = "Deterministic TRAIN/DEV/TEST corpus divisions")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Count words in documents and print a manifest TSV.
    Count(CountArgs),
    /// Divide a manifest into DEV/TRAIN/TEST and print the assignment TSV.
    Split(SplitArgs),
    /// Check an assignment against the division rule.
    Verify(VerifyArgs),
    /// Inspect the built-in table of published divisions.
    Registry {
        #[command(subcommand)]
        action: RegistryAction,
    },
    /// Report document overlap between two divisions.
    Compare(CompareArgs),
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Kind {
    Raw,
    Tree,
}

#[derive(Debug, Args)]
struct CountArgs {
    /// Files or directories (searched recursively).
    #[arg(required = true)]
    inputs: Vec<PathBuf>,
    #[arg(long, value_enum, default_value = "raw")]
    kind: Kind,
    /// TSV of `name<TAB>genre` lines.
    #[arg(long)]
    genre_map: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct Fractions {
    #[arg(long, default_value = "1/10")]
    dev_frac: String,
    #[arg(long, default_value = "1/10")]
    test_frac: String,
    /// Divide each genre separately; labels become `GENRE:LABEL`.
    #[arg(long)]
    stratify: bool,
}

#[derive(Debug, Args)]
struct SplitArgs {
    #[arg(long)]
    manifest: PathBuf,
    #[command(flatten)]
    fractions: Fractions,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    #[arg(long)]
    manifest: PathBuf,
    #[arg(long)]
    assignment: PathBuf,
    #[command(flatten)]
    fractions: Fractions,
}

#[derive(Debug, Args)]
struct Selector {
    #[arg(long)]
    scheme: Option<String>,
    #[arg(long)]
    treebank: Option<String>,
}

#[derive(Debug, Subcommand)]
enum RegistryAction {
    /// List schemes, or the treebanks of one scheme.
    List {
        #[arg(long)]
        scheme: Option<String>,
    },
    /// Print rows as an aligned table (scheme defaults to 10-80-10).
    Show(Selector),
    /// Print rows (or treebank metadata) as TSV.
    Export {
        #[command(flatten)]
        selector: Selector,
        #[arg(long)]
        meta: bool,
    },
    /// Recompute the table arithmetic; exits 1 on any failure.
    Selfcheck,
}

#[derive(Debug, Args)]
struct CompareArgs {
    #[arg(long, requires = "scheme_b", conflicts_with_all = ["assignment_a", "assignment_b"])]
    scheme_a: Option<String>,
    #[arg(long, requires = "scheme_a")]
    scheme_b: Option<String>,
    #[arg(long)]
    treebank: Option<String>,
    #[arg(long, requires = "assignment_b")]
    assignment_a: Option<PathBuf>,
    #[arg(long, requires = "assignment_a")]
    assignment_b: Option<PathBuf>,
    /// Manifest supplying word counts for assignment comparisons.
    #[arg(long, requires = "assignment_a")]
    manifest: Option<PathBuf>,
    #[arg(long)]
    json: bool,
    /// `SCHEME.LABEL:SCHEME.LABEL` — training set, then evaluation set.
    #[arg(long)]
    check_contamination: Option<String>,
}

#[derive(Debug, Error)]
pub(crate) enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{0}")]
    Input(String),
    /// Checks ran and failed; the report is already on stdout.
    #[error("{0}")]
    Failed(String),
}

impl CliError {
    fn exit_code(&self) -> i32 {
        match self {
            CliError::Failed(_) => EXIT_FAILED,
            _ => EXIT_ERROR,
        }
    }
}

pub(crate) type CliResult = Result<i32, CliError>;

pub(crate) fn read_text(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

/// File name without its final extension.
pub(crate) fn stem(path: &Path) -> String {
    path.file_stem().map_or_else(|| path.display().to_string(), |s| s.to_string_lossy().into_owned())
}

/// Runs the tool with `args` (including the program name) and returns the
/// process exit status.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_ERROR } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() { err.write_all(text.as_bytes()) } else { out.write_all(text.as_bytes()) };
            return code;
        }
    };
    let result = match cli.command {
        Command::Count(a) => count::run(a, out),
        Command::Split(a) => divide::split(a, out),
        Command::Verify(a) => divide::verify(a, out),
        Command::Registry { action } => registry::run(action, out),
        Command::Compare(a) => compare::run(a, out),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}

pub(crate) fn emit(out: &mut dyn Write, text: &str) -> Result<(), CliError> {
    out.write_all(text.as_bytes()).map_err(|source| CliError::Io {
        path: PathBuf::from("<stdout>"),
        source,
    })
}
