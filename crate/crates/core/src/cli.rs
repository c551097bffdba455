//! Command-line front end.
//!
//! Exit codes: 0 success, 1 nothing found, 2 hypothesis violated or
//! impossible, 3 compute budget exceeded, 64 usage error, 70 internal or
//! I/O failure.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use crate::cache::CoefficientCache;
use crate::certify::{decimal, Certifier, CertifyError, Verdict, MAX_ALSPACH_K};
use crate::construct::{
    graceful_with_first_diff, ordering_n_minus_2, ordering_n_minus_3, ordering_without_pair,
    Branch, ConstructError, GracefulPermutation,
};
use crate::group::{check_ordering, is_prime, partial_sums, Sequence, Variant};
use crate::oracle::{find_ordering, verify_conjecture, OracleError, SearchTask};

pub const EXIT_OK: i32 = 0;
pub const EXIT_NOT_FOUND: i32 = 1;
pub const EXIT_HYPOTHESIS: i32 = 2;
pub const EXIT_BUDGET: i32 = 3;
pub const EXIT_USAGE: i32 = 64;
pub const EXIT_FAILURE: i32 = 70;

/// Above this `k_max`, `table1` warns about runtime.
const TABLE1_SOFT_CAP: usize = 10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Debug, Parser)]
#[command(
    name = "distinct-sums",
    version,
    about = "Orderings of subsets of Z_n with distinct partial sums"
)]
pub struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    pub format: Format,
    /// Coefficient cache directory (default: $DISTINCT_SUMS_CACHE, else .distinct-sums-cache).
    #[arg(long, value_name = "DIR", global = true)]
    pub cache: Option<PathBuf>,
    /// Keep computed coefficients in memory only.
    #[arg(long, global = true, conflicts_with = "cache")]
    pub no_cache: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print c_{k,j} for 2 <= k <= K_MAX and 1 <= j <= ceil(k/2).
    Table1 {
        #[arg(long, default_value_t = 8)]
        k_max: usize,
    },
    /// Certify ordered subsets of size k, for prime moduli or (with --composite) all moduli.
    Certify {
        k: usize,
        #[arg(long)]
        composite: bool,
    },
    /// Check every admissible subset of Z_n by exhaustive search.
    Verify {
        n: u64,
        #[arg(long, default_value = "alspach", value_parser = parse_variant)]
        variant: Variant,
    },
    /// Order Z_n without 0 and the removed elements (one element: n odd; two: n prime).
    Construct {
        n: u64,
        #[arg(long, value_delimiter = ',', required = true, num_args = 1..)]
        remove: Vec<u64>,
    },
    /// Search for an ordering of a subset of Z_n.
    Find {
        n: u64,
        #[arg(long, value_delimiter = ',', required = true, num_args = 1..)]
        set: Vec<u64>,
        #[arg(long, default_value = "alspach", value_parser = parse_variant)]
        variant: Variant,
        /// Use only this many elements of the set.
        #[arg(long)]
        length: Option<usize>,
    },
    /// Graceful permutation of length r with first absolute difference d.
    Graceful { d: usize, r: usize },
}

fn parse_variant(s: &str) -> Result<Variant, String> {
    s.parse::<Variant>().map_err(|e| e.to_string())
}

/// One entry of the coefficient table.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableEntry {
    pub k: usize,
    pub j: usize,
    #[serde(with = "decimal")]
    pub coefficient: num_bigint::BigInt,
}

/// A validated ordering as printed by `construct` and `find`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrderingRecord {
    pub modulus: u64,
    pub variant: Variant,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub removed: Vec<u64>,
    pub entries: Vec<u64>,
    pub partial_sums: Vec<u64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GracefulRecord {
    pub d: usize,
    pub r: usize,
    pub permutation: GracefulPermutation,
    pub differences: Vec<usize>,
    pub branch: Branch,
}

struct Failure {
    code: i32,
    message: String,
}

impl Failure {
    fn new(code: i32, message: impl Into<String>) -> Self {
        Failure {
            code,
            message: message.into(),
        }
    }
}

impl From<CertifyError> for Failure {
    fn from(e: CertifyError) -> Self {
        let code = match e {
            CertifyError::Budget { .. } => EXIT_BUDGET,
            CertifyError::SmallK(_) | CertifyError::Index { .. } => EXIT_USAGE,
            CertifyError::Hypothesis(_) => EXIT_HYPOTHESIS,
            CertifyError::Poly(_) | CertifyError::Cache(_) => EXIT_FAILURE,
        };
        Failure::new(code, e.to_string())
    }
}

impl From<OracleError> for Failure {
    fn from(e: OracleError) -> Self {
        let code = match e {
            OracleError::Hypothesis(_) => EXIT_HYPOTHESIS,
            OracleError::Budget { .. } => EXIT_BUDGET,
            OracleError::Group(_) => EXIT_USAGE,
        };
        Failure::new(code, e.to_string())
    }
}

impl From<ConstructError> for Failure {
    fn from(e: ConstructError) -> Self {
        let code = match e {
            ConstructError::Impossible { .. } | ConstructError::Hypothesis(_) => EXIT_HYPOTHESIS,
            ConstructError::Range(_) | ConstructError::Group(_) => EXIT_USAGE,
            _ => EXIT_FAILURE,
        };
        Failure::new(code, e.to_string())
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        // A closed stdout (e.g. piping into `head`) is not an error.
        if e.kind() == std::io::ErrorKind::BrokenPipe {
            return Failure::new(EXIT_OK, "");
        }
        Failure::new(EXIT_FAILURE, e.to_string())
    }
}

/// Parses `args` (including the program name), runs the command and
/// returns the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{e}");
                    EXIT_OK
                }
                _ => {
                    let _ = write!(err, "{e}");
                    EXIT_USAGE
                }
            };
        }
    };
    match dispatch(&cli, out, err) {
        Ok(code) => code,
        Err(f) => {
            if !f.message.is_empty() {
                let _ = writeln!(err, "error: {}", f.message);
            }
            f.code
        }
    }
}

fn dispatch(cli: &Cli, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32, Failure> {
    match &cli.command {
        Command::Table1 { k_max } => cmd_table1(cli, *k_max, out, err),
        Command::Certify { k, composite } => cmd_certify(cli, *k, *composite, out),
        Command::Verify { n, variant } => cmd_verify(cli, *n, *variant, out),
        Command::Construct { n, remove } => cmd_construct(cli, *n, remove, out),
        Command::Find {
            n,
            set,
            variant,
            length,
        } => cmd_find(cli, *n, set, *variant, *length, out),
        Command::Graceful { d, r } => cmd_graceful(cli, *d, *r, out),
    }
}

fn certifier(cli: &Cli) -> Result<Certifier, Failure> {
    if cli.no_cache {
        return Ok(Certifier::new());
    }
    let dir = CoefficientCache::resolve_dir(cli.cache.as_deref());
    let cache = CoefficientCache::open(&dir)
        .map_err(|e| Failure::new(EXIT_FAILURE, format!("{}: {e}", dir.display())))?;
    Ok(Certifier::with_cache(cache))
}

fn print_json<T: Serialize>(out: &mut dyn Write, value: &T) -> Result<(), Failure> {
    let text = serde_json::to_string_pretty(value)
        .map_err(|e| Failure::new(EXIT_FAILURE, e.to_string()))?;
    writeln!(out, "{text}")?;
    Ok(())
}

fn cmd_table1(
    cli: &Cli,
    k_max: usize,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> Result<i32, Failure> {
    if k_max < 2 {
        return Err(Failure::new(
            EXIT_USAGE,
            format!("--k-max must be at least 2, got {k_max}"),
        ));
    }
    if k_max > MAX_ALSPACH_K {
        return Err(Failure::new(
            EXIT_BUDGET,
            format!("--k-max = {k_max} exceeds the compute budget (max {MAX_ALSPACH_K})"),
        ));
    }
    if k_max > TABLE1_SOFT_CAP {
        writeln!(err, "warning: k = {k_max} takes minutes per coefficient")?;
    }
    let rows = certifier(cli)?.table1(k_max)?;
    match cli.format {
        Format::Text => {
            for row in &rows {
                let values: Vec<String> = row.values.iter().map(|v| v.to_string()).collect();
                writeln!(out, "{}: {}", row.k, values.join(" "))?;
            }
        }
        Format::Json => {
            let entries: Vec<TableEntry> = rows
                .into_iter()
                .flat_map(|row| {
                    let k = row.k;
                    row.values
                        .into_iter()
                        .enumerate()
                        .map(move |(i, c)| TableEntry {
                            k,
                            j: i + 1,
                            coefficient: c,
                        })
                })
                .collect();
            print_json(out, &entries)?;
        }
    }
    Ok(EXIT_OK)
}

fn cmd_certify(cli: &Cli, k: usize, composite: bool, out: &mut dyn Write) -> Result<i32, Failure> {
    if k < 2 {
        return Err(Failure::new(
            EXIT_USAGE,
            format!("k must be at least 2, got {k}"),
        ));
    }
    let certifier = certifier(cli)?;
    let cert = if composite {
        certifier.certify_moduli(k)?
    } else {
        certifier.certify_primes(k)?
    };
    match cli.format {
        Format::Text => writeln!(out, "{cert}")?,
        Format::Json => writeln!(out, "{}", cert.to_json())?,
    }
    Ok(if cert.verdict == Verdict::Covered {
        EXIT_OK
    } else {
        EXIT_HYPOTHESIS
    })
}

fn cmd_verify(cli: &Cli, n: u64, variant: Variant, out: &mut dyn Write) -> Result<i32, Failure> {
    let report = verify_conjecture(n, variant)?;
    match cli.format {
        Format::Text => write!(out, "{report}")?,
        Format::Json => print_json(out, &report)?,
    }
    Ok(if report.holds() {
        EXIT_OK
    } else {
        EXIT_NOT_FOUND
    })
}

/// Validates `seq` and prints it; nothing unvalidated is ever emitted.
fn emit_ordering(
    cli: &Cli,
    seq: &Sequence,
    variant: Variant,
    removed: &[u64],
    out: &mut dyn Write,
) -> Result<(), Failure> {
    let report = check_ordering(seq, variant);
    if !report.valid {
        return Err(Failure::new(
            EXIT_FAILURE,
            format!(
                "refusing to print invalid ordering {seq}: {}",
                report.reason.unwrap_or_default()
            ),
        ));
    }
    let sums = partial_sums(seq).sums;
    match cli.format {
        Format::Text => {
            writeln!(out, "ordering: {seq}")?;
            let parts: Vec<String> = sums.iter().map(u64::to_string).collect();
            writeln!(out, "partial sums: ({})", parts.join(","))?;
        }
        Format::Json => print_json(
            out,
            &OrderingRecord {
                modulus: seq.modulus(),
                variant,
                removed: removed.to_vec(),
                entries: seq.entries().to_vec(),
                partial_sums: sums,
            },
        )?,
    }
    Ok(())
}

fn cmd_construct(cli: &Cli, n: u64, remove: &[u64], out: &mut dyn Write) -> Result<i32, Failure> {
    let seq = match *remove {
        [x] => ordering_n_minus_2(n, x)?,
        [x, y] if is_prime(n) => ordering_n_minus_3(n, x, y)?,
        [x, y] => ordering_without_pair(n, x, y)?,
        _ => {
            return Err(Failure::new(
                EXIT_USAGE,
                format!("--remove takes one or two elements, got {}", remove.len()),
            ))
        }
    };
    let removed: Vec<u64> = remove.iter().map(|x| x % n).collect();
    emit_ordering(cli, &seq, Variant::Alspach, &removed, out)?;
    Ok(EXIT_OK)
}

fn cmd_find(
    cli: &Cli,
    n: u64,
    set: &[u64],
    variant: Variant,
    length: Option<usize>,
    out: &mut dyn Write,
) -> Result<i32, Failure> {
    let task = match length {
        Some(len) => SearchTask::new(n, set, variant, len)?,
        None => SearchTask::full(n, set, variant)?,
    };
    match find_ordering(&task) {
        Some(seq) => {
            emit_ordering(cli, &seq, variant, &[], out)?;
            Ok(EXIT_OK)
        }
        None => {
            match cli.format {
                Format::Text => writeln!(out, "NONE")?,
                Format::Json => writeln!(out, "null")?,
            }
            Ok(EXIT_NOT_FOUND)
        }
    }
}

fn cmd_graceful(cli: &Cli, d: usize, r: usize, out: &mut dyn Write) -> Result<i32, Failure> {
    let (perm, branch) = graceful_with_first_diff(d, r)?;
    let record = GracefulRecord {
        d,
        r,
        differences: perm.differences(),
        permutation: perm,
        branch,
    };
    match cli.format {
        Format::Text => {
            writeln!(out, "permutation: {}", record.permutation)?;
            let diffs: Vec<String> = record.differences.iter().map(usize::to_string).collect();
            writeln!(out, "differences: ({})", diffs.join(","))?;
            writeln!(out, "branch: {}", record.branch)?;
        }
        Format::Json => print_json(out, &record)?,
    }
    Ok(EXIT_OK)
}
