//! `siegel`: batch front end for Fourier coefficients, p-stabilization,
//! Satake data and Λ-adic families of Siegel Eisenstein series.

mod commands;
mod render;
mod verify;

use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use siegel_core::Error;

#[derive(Parser, Debug)]
#[command(name = "siegel", version, about = "Siegel Eisenstein series: coefficients, stabilization, Satake data, Λ-adic families")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Level-one Fourier coefficients (and the constant term).
    Coeff(Common),
    /// Semi-ordinary p-stabilization by the closed formula and the operator route.
    Stabilize(Common),
    /// Satake parameters, Hecke polynomial, Q* and the divisibility check.
    Satake(Common),
    /// Λ-adic coefficients A_T(ω^a; X) and the B-cleared expansion.
    Lambda(Common),
    /// Run a verification suite.
    Verify(VerifyArgs),
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Table,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    Local,
    Stab,
    Satake,
    Lambda,
    All,
}

#[derive(Args, Debug, Clone)]
pub struct Common {
    #[arg(long, env = "SIEGEL_GENUS")]
    pub genus: Option<usize>,
    #[arg(long, env = "SIEGEL_WEIGHT", allow_negative_numbers = true)]
    pub weight: Option<i64>,
    #[arg(long, env = "SIEGEL_P")]
    pub p: Option<u64>,
    /// Branch ω^a of the Λ-adic family.
    #[arg(long, env = "SIEGEL_A")]
    pub a: Option<u64>,
    /// Entries of 2T, rows separated by ';', e.g. "2,1;1,2".
    #[arg(long, env = "SIEGEL_MATRIX")]
    pub matrix: Option<String>,
    #[arg(long = "trace-bound", env = "SIEGEL_TRACE_BOUND")]
    pub trace_bound: Option<u64>,
    /// p-adic precision M.
    #[arg(long, env = "SIEGEL_PPREC")]
    pub pprec: Option<u32>,
    /// X-adic precision N.
    #[arg(long, env = "SIEGEL_XPREC")]
    pub xprec: Option<usize>,
    #[arg(long, value_enum, env = "SIEGEL_FORMAT", default_value = "json")]
    pub format: Format,
    #[arg(long, env = "SIEGEL_JOBS", default_value_t = 1)]
    pub jobs: usize,
}

#[derive(Args, Debug, Clone)]
pub struct VerifyArgs {
    #[arg(long, value_enum, env = "SIEGEL_SUITE", default_value = "all")]
    pub suite: Suite,
    #[command(flatten)]
    pub common: Common,
}

/// Failure classes, one per exit code.
#[derive(Debug)]
pub enum Failure {
    Usage(String),
    Scope(String),
    Verification(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        if e.is_scope() {
            return Failure::Scope(e.to_string());
        }
        match e {
            Error::InvalidInput(_)
            | Error::NotDiscriminant(_)
            | Error::ZeroArgument
            | Error::Indefinite
            | Error::Singular => Failure::Usage(e.to_string()),
            e => Failure::Verification(e.to_string()),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let jobs = match &cli.command {
        Command::Verify(v) => v.common.jobs,
        Command::Coeff(c) | Command::Stabilize(c) | Command::Satake(c) | Command::Lambda(c) => c.jobs,
    };
    if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(jobs.max(1)).build_global() {
        eprintln!("error: thread pool: {e}");
        return ExitCode::from(2);
    }
    match commands::run(&cli.command) {
        Ok(out) => {
            println!("{}", out.text);
            if out.ok {
                ExitCode::SUCCESS
            } else {
                eprintln!("verification failed: see the report");
                ExitCode::from(1)
            }
        }
        Err(Failure::Usage(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
        Err(Failure::Scope(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(3)
        }
        Err(Failure::Verification(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(1)
        }
    }
}
