use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use zastava::harness::{emit_report, load_config, run, Suite, SuiteConfig};
use zastava::Error;

/// Runs verification suites and writes a JSON report.
#[derive(Parser, Debug)]
#[command(version, about)]
struct Args {
    /// JSON configuration file.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Suite to run; repeatable, replaces the configured list.
    #[arg(long = "suite")]
    suites: Vec<String>,
    #[arg(long)]
    seed: Option<u64>,
    /// Series truncation order.
    #[arg(long)]
    order: Option<usize>,
    /// Membership degree bound (default deg + 2).
    #[arg(long)]
    bound: Option<usize>,
    /// Treat inconclusive cases as failures.
    #[arg(long)]
    strict: bool,
    /// Report path; stdout when absent.
    #[arg(long)]
    report: Option<PathBuf>,
    /// List suite names and exit.
    #[arg(long)]
    list: bool,
}

fn config(args: &Args) -> Result<SuiteConfig, Error> {
    let mut cfg = match &args.config {
        Some(path) => load_config(path)?,
        None => SuiteConfig::new(2, vec![1, 1], &[]),
    };
    if !args.suites.is_empty() {
        cfg.suites = args.suites.clone();
    }
    if let Some(s) = args.seed {
        cfg.seed = s;
    }
    if let Some(o) = args.order {
        cfg.order = o;
    }
    if args.bound.is_some() {
        cfg.bound = args.bound;
    }
    cfg.strict |= args.strict;
    cfg.validate()?;
    Ok(cfg)
}

fn main() -> ExitCode {
    let args = Args::parse();
    if args.list {
        for name in Suite::names() {
            println!("{name}");
        }
        return ExitCode::SUCCESS;
    }
    let cfg = match config(&args) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    let report = match run(&cfg) {
        Ok(r) => r,
        Err(e @ Error::Config(_)) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    };
    match &args.report {
        Some(path) => {
            if let Err(e) = emit_report(&report, path) {
                eprintln!("error: {e}");
                return ExitCode::from(1);
            }
        }
        None => println!("{}", report.to_json()),
    }
    let s = &report.summary;
    eprintln!(
        "{}: {} verified, {} refuted, {} inconclusive, {} skipped",
        if report.passed { "ok" } else { "FAILED" },
        s.verified,
        s.refuted,
        s.inconclusive,
        s.skipped
    );
    ExitCode::from(report.exit_code() as u8)
}
