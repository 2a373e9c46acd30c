//! `nsamg`: verify two-grid theory on a problem, run a worked example, or
//! generate a test matrix.
//!
//! Exit codes: 0 all checks pass, 1 some check fails, 2 configuration or
//! parse error.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use nsamg::harness::problem::{convection_diffusion, ProblemSpec, Scheme};
use nsamg::harness::{emit_report, mtx, run_verification, Format, VerificationReport};

#[derive(Parser)]
#[command(name = "nsamg", version, about = "Two-grid analysis in B-inner products")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum OutFormat {
    Json,
    Csv,
    Text,
}

impl From<OutFormat> for Format {
    fn from(f: OutFormat) -> Self {
        match f {
            OutFormat::Json => Format::Json,
            OutFormat::Csv => Format::Csv,
            OutFormat::Text => Format::Text,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum GenType {
    ConvDiff,
}

#[derive(Clone, Copy, ValueEnum)]
enum SchemeArg {
    Central,
    Upwind,
}

#[derive(Subcommand)]
enum Command {
    /// Run the verification pipeline on a JSON problem spec.
    Verify {
        #[arg(long)]
        problem: PathBuf,
        /// Output file; the report goes to stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "json")]
        format: OutFormat,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        nu1: Option<usize>,
        #[arg(long)]
        nu2: Option<usize>,
        #[arg(long)]
        nc: Option<usize>,
        #[arg(long)]
        trials: Option<usize>,
    },
    /// Verify one of the three built-in worked examples.
    Example {
        #[arg(value_parser = clap::value_parser!(u8).range(1..=3))]
        id: u8,
        #[arg(long, value_enum, default_value = "text")]
        format: OutFormat,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        trials: Option<usize>,
    },
    /// Write a generated matrix in Matrix Market format.
    Generate {
        #[arg(long = "type", value_enum)]
        kind: GenType,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 0.0)]
        beta: f64,
        #[arg(long, value_enum, default_value = "central")]
        scheme: SchemeArg,
        #[arg(long)]
        out: PathBuf,
    },
}

fn output(report: &VerificationReport, format: OutFormat, out: Option<PathBuf>) -> nsamg::Result<()> {
    match out {
        Some(path) => emit_report(report, format.into(), path),
        None => {
            print!("{}", report.render(format.into())?);
            Ok(())
        }
    }
}

fn verify(spec: ProblemSpec, format: OutFormat, out: Option<PathBuf>) -> ExitCode {
    let report = match run_verification(&spec) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    if let Err(e) = output(&report, format, out) {
        eprintln!("error: {e}");
        return ExitCode::from(2);
    }
    let s = report.summary;
    eprintln!("{} checks: {} pass, {} fail, {} skipped", s.total, s.pass, s.fail, s.skipped);
    if report.all_passed() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(2) } else { ExitCode::SUCCESS };
        }
    };
    match cli.command {
        Command::Verify {
            problem,
            out,
            format,
            seed,
            nu1,
            nu2,
            nc,
            trials,
        } => {
            let mut spec = match ProblemSpec::from_path(&problem) {
                Ok(s) => s,
                Err(e) => {
                    eprintln!("error: {}: {e}", problem.display());
                    return ExitCode::from(2);
                }
            };
            spec.seed = seed.unwrap_or(spec.seed);
            spec.trials = trials.unwrap_or(spec.trials);
            spec.nu1 = nu1.or(spec.nu1);
            spec.nu2 = nu2.or(spec.nu2);
            spec.nc = nc.or(spec.nc);
            verify(spec, format, out)
        }
        Command::Example {
            id,
            format,
            out,
            seed,
            trials,
        } => {
            let mut spec = ProblemSpec::builtin(id);
            spec.seed = seed.unwrap_or(spec.seed);
            spec.trials = trials.unwrap_or(spec.trials);
            verify(spec, format, out)
        }
        Command::Generate {
            kind: GenType::ConvDiff,
            n,
            beta,
            scheme,
            out,
        } => {
            let scheme = match scheme {
                SchemeArg::Central => Scheme::Central,
                SchemeArg::Upwind => Scheme::Upwind,
            };
            let result = convection_diffusion(n, beta, scheme).and_then(|a| mtx::write_path(&out, a.as_ref()));
            match result {
                Ok(()) => ExitCode::SUCCESS,
                Err(e) => {
                    eprintln!("error: {e}");
                    ExitCode::from(2)
                }
            }
        }
    }
}
