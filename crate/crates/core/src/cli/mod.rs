//! Batch front-end: `check`, `validate` and `eval` jobs with JSON reports.

pub mod check;
pub mod config;
pub mod eval;
pub mod report;
pub mod validate;

use std::fs;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};

use crate::criteria::Outcome;
use crate::error::{Error, Result};
pub use config::{CaseChoice, CheckJob, NumericConfig, PointsConfig, SymbolicConfig};
pub use report::{Check, Comparator, Report};
pub use validate::ValidateOptions;

pub const EXIT_OK: i32 = 0;
pub const EXIT_INCONCLUSIVE: i32 = 2;
pub const EXIT_VALIDATION_FAILED: i32 = 3;
pub const EXIT_CONFIG: i32 = 4;

#[derive(Debug, Parser)]
#[command(name = "ehyp", version, about = "Transcendence verdicts and numerics for elliptic hypergeometric equations")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run the transcendence criteria on a symbolic configuration.
    Check {
        #[arg(long)]
        case: Option<CaseChoice>,
        #[arg(long)]
        params: PathBuf,
        /// Report path; stdout when absent.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the numeric residual checks.
    Validate {
        #[arg(long)]
        params: PathBuf,
        #[arg(long)]
        trunc: Option<usize>,
        #[arg(long)]
        nodes: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Tabulate θ, Γ, A, ν, V and f at given points.
    Eval {
        #[arg(long)]
        params: PathBuf,
        #[arg(long)]
        points: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::Config(format!("{}: {e}", path.display())))
}

fn opt_bytes<T: ToString>(x: Option<T>) -> Vec<u8> {
    x.map(|v| v.to_string()).unwrap_or_default().into_bytes()
}

/// A finished job: the report and the exit code it implies.
pub struct Finished {
    pub report: Report,
    pub code: i32,
    pub summary: String,
}

pub fn execute(cmd: &Command) -> Result<Finished> {
    match cmd {
        Command::Check { case, params, .. } => {
            let text = read(params)?;
            let cfg: SymbolicConfig = config::parse_json(&text, &params.display().to_string())?;
            let job = cfg.resolve(*case)?;
            let case_tag = case.map(|c| format!("{c:?}"));
            let digest = report::digest(&[b"check", &opt_bytes(case_tag), text.as_bytes()]);
            let (report, outcome) = check::run_check(&job, Report::new("check", digest))?;
            let code = match outcome {
                Outcome::Transcendental => EXIT_OK,
                Outcome::Inconclusive => EXIT_INCONCLUSIVE,
            };
            let summary = format!("check: {} [{}]", outcome, report.reasons.join(", "));
            Ok(Finished { report, code, summary })
        }
        Command::Validate { params, trunc, nodes, seed, .. } => {
            let text = read(params)?;
            let cfg: NumericConfig = config::parse_json(&text, &params.display().to_string())?;
            let np = cfg.params(*trunc, *nodes)?;
            let defaults = ValidateOptions::default();
            let opts = ValidateOptions {
                seed: seed.or(cfg.seed).unwrap_or(defaults.seed),
                samples: cfg.samples.unwrap_or(defaults.samples),
                annulus: cfg.annulus.unwrap_or(defaults.annulus),
            };
            if opts.samples < 2 || !(0.0 < opts.annulus[0] && opts.annulus[0] <= opts.annulus[1]) {
                return Err(Error::Config("samples must be ≥ 2 and annulus 0 < r_min ≤ r_max".into()));
            }
            let digest = report::digest(&[
                b"validate",
                text.as_bytes(),
                &opt_bytes(*trunc),
                &opt_bytes(*nodes),
                &opt_bytes(*seed),
            ]);
            let (report, ok) = validate::run_validate(&np, &opts, Report::new("validate", digest));
            let lines: Vec<String> = report
                .residuals
                .iter()
                .map(|c| {
                    let v = c.value.map_or_else(|| "error".to_string(), |v| format!("{v:.3e}"));
                    format!("  {:<27} {:>10}  {}", c.name, v, if c.pass { "pass" } else { "FAIL" })
                })
                .collect();
            let summary = format!("validate: {}\n{}", report.outcome.as_deref().unwrap_or(""), lines.join("\n"));
            let code = if ok { EXIT_OK } else { EXIT_VALIDATION_FAILED };
            Ok(Finished { report, code, summary })
        }
        Command::Eval { params, points, .. } => {
            let text = read(params)?;
            let cfg: NumericConfig = config::parse_json(&text, &params.display().to_string())?;
            let np = cfg.params(None, None)?;
            let ptext = read(points)?;
            let pts: PointsConfig = config::parse_json(&ptext, &points.display().to_string())?;
            let functions = eval::check_functions(pts.functions.as_deref())?;
            let zs: Vec<_> = pts.points.iter().map(|z| config::cplx(*z)).collect();
            let digest = report::digest(&[b"eval", text.as_bytes(), ptext.as_bytes()]);
            let report = eval::run_eval(&np, &zs, &functions, Report::new("eval", digest));
            let summary = format!("eval: {} points", zs.len());
            Ok(Finished { report, code: EXIT_OK, summary })
        }
    }
}

fn out_path(cmd: &Command) -> Option<&PathBuf> {
    match cmd {
        Command::Check { out, .. } | Command::Validate { out, .. } | Command::Eval { out, .. } => out.as_ref(),
    }
}

/// Parses `args` (program name first), runs the job and writes the report.
/// The human-readable summary goes to stderr; the JSON report to `--out` or
/// stdout. Returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_CONFIG } else { EXIT_OK };
        }
    };
    match execute(&cli.command) {
        Ok(done) => {
            let json = done.report.to_json();
            match out_path(&cli.command) {
                Some(path) => {
                    if let Err(e) = fs::write(path, json) {
                        eprintln!("error: {}: {e}", path.display());
                        return EXIT_CONFIG;
                    }
                }
                None => print!("{json}"),
            }
            eprintln!("{}", done.summary);
            done.code
        }
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_CONFIG
        }
    }
}
