//! Command-line front end shared by the `qproof` binary and the tests.
//!
//! `run` takes the argument list and two writers and returns the process
//! exit code: 0 on success, 1 for unreadable input or unsupported
//! requests, 2 when the sequent is not provable, 3 when quantum recovery
//! fails after its retries.

mod bench;
mod report;
mod selftest;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

pub use bench::{max_k, rows_to_csv, run_bench, BenchOptions, BenchReport, BenchRow, BenchSummary};
pub use report::{
    prove_report, Method, ProofText, ProveOptions, ReportHistogram, RunReport, Status,
    MAX_PAIRDB_K, SCHEMA,
};
pub use selftest::{run_selftest, SUITES};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 1;
pub const EXIT_NOT_PROVABLE: i32 = 2;
pub const EXIT_RECOVERY: i32 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "qproof",
    version,
    about = "Grover-assisted proof search for linear logic sequents"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Prove one sequent and print a run report.
    Prove(ProveArgs),
    /// Recover random permutations for several clause counts.
    Bench(BenchArgs),
    /// Run the built-in invariant checks.
    Selftest(SelftestArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
    Latex,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum BenchFormat {
    Csv,
    Json,
}

#[derive(Debug, Args)]
pub struct ProveArgs {
    /// Sequent such as "A*(B*C) |- C*(A*B)".
    #[arg(long, required_unless_present = "file", conflicts_with = "file")]
    pub sequent: Option<String>,
    /// Read the sequent from a file instead.
    #[arg(long)]
    pub file: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Method::Pairdb)]
    pub method: Method,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Measurements per pair-database query.
    #[arg(long, default_value_t = 1000)]
    pub shots: u64,
    /// Maximum measured runs of the split search.
    #[arg(long, default_value_t = 200)]
    pub budget: u64,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Write the report here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Record wall time (reports are otherwise byte-identical per seed).
    #[arg(long)]
    pub timing: bool,
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    #[arg(long, value_delimiter = ',', default_value = "2,4,8,16,32,64")]
    pub k_list: Vec<usize>,
    #[arg(long, default_value_t = 20)]
    pub trials: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 1000)]
    pub shots: u64,
    #[arg(long, value_enum, default_value_t = Method::Pairdb)]
    pub method: Method,
    #[arg(long, default_value_t = 200)]
    pub budget: u64,
    #[arg(long, value_enum, default_value_t = BenchFormat::Csv)]
    pub format: BenchFormat,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SelftestArgs {
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

fn emit(out: &mut dyn Write, path: Option<&PathBuf>, body: &str) -> std::io::Result<()> {
    match path {
        Some(p) => std::fs::write(p, body),
        None => out.write_all(body.as_bytes()),
    }
}

pub fn cmd_prove(args: &ProveArgs, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let text = match (&args.sequent, &args.file) {
        (Some(s), _) => s.clone(),
        (None, Some(p)) => match std::fs::read_to_string(p) {
            Ok(t) => t,
            Err(e) => {
                let _ = writeln!(err, "error: cannot read {}: {e}", p.display());
                return EXIT_INPUT;
            }
        },
        (None, None) => unreachable!("clap requires --sequent or --file"),
    };
    let opts = ProveOptions {
        method: args.method,
        seed: args.seed,
        shots: args.shots,
        budget: args.budget,
        timing: args.timing,
    };
    let report = match prove_report(text.trim(), &opts) {
        Ok(r) => r,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            return EXIT_INPUT;
        }
    };
    let body = match args.format {
        Format::Json => report.to_json(),
        Format::Text => report.to_text(),
        Format::Latex => report.to_latex(),
    };
    if let Err(e) = emit(out, args.out.as_ref(), &body) {
        let _ = writeln!(err, "error: cannot write report: {e}");
        return EXIT_INPUT;
    }
    if let Some(e) = &report.error {
        let _ = writeln!(err, "error: {e}");
    }
    report.exit_code()
}

pub fn cmd_bench(args: &BenchArgs, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let opts = BenchOptions {
        ks: args.k_list.clone(),
        trials: args.trials,
        seed: args.seed,
        shots: args.shots,
        method: args.method,
        budget: args.budget,
    };
    let report = match run_bench(&opts) {
        Ok(r) => r,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            return EXIT_INPUT;
        }
    };
    let body = match args.format {
        BenchFormat::Csv => rows_to_csv(&report.rows),
        BenchFormat::Json => {
            serde_json::to_string_pretty(&report).expect("report serializes") + "\n"
        }
    };
    if let Err(e) = emit(out, args.out.as_ref(), &body) {
        let _ = writeln!(err, "error: cannot write report: {e}");
        return EXIT_INPUT;
    }
    for s in &report.summary {
        let _ = writeln!(
            err,
            "k={:<3} success {}/{}  qubits {}  oracle calls {}  p_theory {:.6}  p_empirical {:.6}",
            s.k, s.successes, s.trials, s.qubits, s.oracle_calls, s.p_theory, s.mean_p_empirical
        );
    }
    EXIT_OK
}

pub fn cmd_selftest(args: &SelftestArgs, out: &mut dyn Write) -> i32 {
    let mut failed = 0;
    for (name, result) in run_selftest(args.seed) {
        let _ = match result {
            Ok(()) => writeln!(out, "ok    {name}"),
            Err(e) => {
                failed += 1;
                writeln!(out, "FAIL  {name}: {e}")
            }
        };
    }
    let _ = writeln!(out, "{} suites, {failed} failed", SUITES.len());
    if failed == 0 {
        EXIT_OK
    } else {
        EXIT_INPUT
    }
}

/// Parses `args` (program name first) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            if e.use_stderr() {
                let _ = write!(err, "{}", e.render());
                return EXIT_INPUT;
            }
            let _ = write!(out, "{}", e.render());
            return EXIT_OK;
        }
    };
    match &cli.command {
        Command::Prove(a) => cmd_prove(a, out, err),
        Command::Bench(a) => cmd_bench(a, out, err),
        Command::Selftest(a) => cmd_selftest(a, out),
    }
}
