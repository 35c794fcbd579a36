//! Argument parsing, output sinks and exit codes.

use std::ffi::OsString;
use std::fs::{File, OpenOptions};
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use crate::commands::{decompose, generate, parse_subspace, verify, FieldArg, GenRequest, Generator};
use crate::config::{parse_order, parse_unit, Format, RunConfig, Suite, SuiteConfig, DEFAULT_ORDER};
use crate::error::CliError;
use crate::report::{summarize, write_csv, write_json_lines};

/// Environment variable capping the number of worker threads.
pub const THREADS_ENV: &str = "HARDY_LAB_THREADS";

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "hardy-lab", version, about = "Seeded numerical checks for nearly invariant subspaces of the Hardy space")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run verification suites and write one certificate per check.
    Verify(VerifyArgs),
    /// Decompose a subspace read from JSON.
    Decompose(DecomposeArgs),
    /// Generate an instance with embedded certificates.
    Gen(GenArgs),
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// Suites to run; repeat or separate with commas.
    #[arg(long, value_enum, value_delimiter = ',', required = true)]
    pub suite: Vec<Suite>,
    #[arg(long, default_value_t = DEFAULT_ORDER, value_parser = parse_order)]
    pub order: usize,
    /// Randomized trials per suite (default: per-suite).
    #[arg(long)]
    pub trials: Option<usize>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Certificate tolerance for suites that take one.
    #[arg(long, default_value_t = crate::config::DEFAULT_TOL, value_parser = parse_unit)]
    pub tol: f64,
    #[arg(long = "rank-tol", default_value_t = crate::config::DEFAULT_RANK_TOL, value_parser = parse_unit)]
    pub rank_tol: f64,
    /// Append records to this file instead of writing to stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
}

impl VerifyArgs {
    pub fn config(&self) -> RunConfig {
        RunConfig {
            suite: SuiteConfig {
                order: self.order,
                trials: self.trials,
                seed: self.seed,
                tol: self.tol,
                rank_tol: self.rank_tol,
            },
            suites: self.suite.clone(),
            out: self.out.clone(),
            format: self.format,
        }
    }
}

#[derive(Debug, Args)]
pub struct DecomposeArgs {
    /// Subspace or instance JSON; `-` reads stdin.
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long = "rank-tol", default_value_t = crate::config::DEFAULT_RANK_TOL, value_parser = parse_unit)]
    pub rank_tol: f64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct GenArgs {
    #[arg(long, value_enum)]
    pub generator: Generator,
    #[arg(long, default_value_t = DEFAULT_ORDER, value_parser = parse_order)]
    pub order: usize,
    #[arg(long = "rank-tol", default_value_t = crate::config::DEFAULT_RANK_TOL, value_parser = parse_unit)]
    pub rank_tol: f64,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Inner function: `1`, `z`, `z<k>` or Blaschke JSON.
    #[arg(long)]
    pub theta: Option<String>,
    /// Toeplitz symbol: `zbar<k>`, `z<k>` or symbol JSON.
    #[arg(long)]
    pub symbol: Option<String>,
    /// Multiplier for `inner_multiplier`, same syntax as `--theta`.
    #[arg(long)]
    pub g: Option<String>,
    /// Number of defect vectors for `defect_instance`.
    #[arg(long, default_value_t = 1)]
    pub n: usize,
    /// Dimension for `random_subspace`.
    #[arg(long, default_value_t = 3)]
    pub dim: usize,
    #[arg(long, value_enum, default_value_t = FieldArg::Complex)]
    pub field: FieldArg,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

impl GenArgs {
    pub fn request(&self) -> GenRequest {
        GenRequest {
            generator: self.generator,
            order: self.order,
            rank_tol: self.rank_tol,
            seed: self.seed,
            theta: self.theta.clone(),
            symbol: self.symbol.clone(),
            g: self.g.clone(),
            n: self.n,
            dim: self.dim,
            field: self.field,
        }
    }
}

/// Parses arguments, runs the command and returns the process exit code.
/// Diagnostics go to stderr.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    match dispatch(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

fn dispatch(cli: &Cli) -> Result<i32, CliError> {
    match &cli.command {
        Command::Verify(args) => run_verify(&args.config()),
        Command::Decompose(args) => {
            let text = read_input(&args.input)?;
            let m = parse_subspace(&text)?;
            let report = decompose(&m, args.rank_tol)?;
            write_document(args.out.as_deref(), &report)?;
            Ok(if report.certificate.pass { EXIT_PASS } else { EXIT_FAIL })
        }
        Command::Gen(args) => {
            let inst = generate(&args.request())?;
            write_document(args.out.as_deref(), &inst)?;
            Ok(if inst.pass() { EXIT_PASS } else { EXIT_FAIL })
        }
    }
}

/// Thread count from [`THREADS_ENV`], if set.
pub fn thread_cap() -> Result<Option<usize>, CliError> {
    match std::env::var(THREADS_ENV) {
        Err(std::env::VarError::NotPresent) => Ok(None),
        Err(e) => Err(CliError::Usage(format!("{THREADS_ENV}: {e}"))),
        Ok(s) => match s.trim().parse::<usize>() {
            Ok(n) if n > 0 => Ok(Some(n)),
            _ => Err(CliError::Usage(format!("{THREADS_ENV} must be a positive integer, got {s:?}"))),
        },
    }
}

fn run_verify(cfg: &RunConfig) -> Result<i32, CliError> {
    cfg.validate()?;
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = thread_cap()? {
        builder = builder.num_threads(n);
    }
    let pool = builder.build()?;
    let outcome = pool.install(|| verify(cfg))?;

    match &cfg.out {
        Some(path) => {
            let fresh = !path.exists() || std::fs::metadata(path)?.len() == 0;
            let file = OpenOptions::new().create(true).append(true).open(path)?;
            write_records(file, cfg.format, &outcome.records, fresh)?;
        }
        None => write_records(io::stdout().lock(), cfg.format, &outcome.records, true)?,
    }
    for (suite, passed, total) in summarize(&outcome.records) {
        eprintln!("{:<10} {passed}/{total} passed", suite.name());
    }
    Ok(if outcome.all_pass { EXIT_PASS } else { EXIT_FAIL })
}

fn write_records<W: Write>(w: W, format: Format, records: &[crate::report::Record], header: bool) -> Result<(), CliError> {
    match format {
        Format::Json => write_json_lines(w, records),
        Format::Csv => write_csv(w, records, header),
    }
}

fn read_input(path: &Path) -> Result<String, CliError> {
    let mut text = String::new();
    if path.as_os_str() == "-" {
        io::stdin().read_to_string(&mut text)?;
    } else {
        File::open(path)?.read_to_string(&mut text)?;
    }
    Ok(text)
}

fn write_document<T: serde::Serialize>(out: Option<&Path>, value: &T) -> Result<(), CliError> {
    let mut text = serde_json::to_string(value)?;
    text.push('\n');
    match out {
        Some(path) => std::fs::write(path, text)?,
        None => io::stdout().lock().write_all(text.as_bytes())?,
    }
    Ok(())
}
