mod commands;
mod verify;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use hyperbm::{ScalarDomain, SolverConfig};
use serde_json::json;

#[derive(Parser)]
#[command(name = "hyperbm", version, about = "Third-order hypermatrix algebra under the BM product")]
struct Cli {
    #[command(flatten)]
    run: RunArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone, Debug)]
struct RunArgs {
    /// rational, gf:q or complex. Defaults to the domain declared by the input file.
    #[arg(long, global = true)]
    domain: Option<String>,
    #[arg(long, global = true, default_value_t = hyperbm::scalar::DEFAULT_TOL)]
    tol: f64,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[arg(long, global = true, default_value_t = 50)]
    restarts: usize,
    #[arg(long, global = true, default_value_t = 500)]
    iters: usize,
    /// Cap on candidates enumerated by exhaustive searches.
    #[arg(long, global = true, default_value_t = 10_000_000)]
    budget: u64,
    /// Pivot depth slice for the generic rank pipeline.
    #[arg(long, global = true)]
    tau: Option<usize>,
    /// Write the JSON result here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// BM product of three hypermatrices, optionally over a background hypermatrix.
    Prod {
        a0: PathBuf,
        a1: PathBuf,
        a2: PathBuf,
        #[arg(long)]
        background: Option<PathBuf>,
    },
    /// Rank certificate.
    Rank {
        input: PathBuf,
        #[arg(long, value_enum, default_value_t = RankStrategy::MinBound)]
        strategy: RankStrategy,
    },
    /// Diagonal dependence among depth slices.
    Dependence {
        input: PathBuf,
        /// Test subsets of this many depth slices (default: all of them).
        #[arg(long)]
        size: Option<usize>,
        #[arg(long, value_enum, default_value_t = Notion::Pivoted)]
        notion: Notion,
        /// Decomposition of the input with fewer terms than its smallest side; searches for
        /// the relation among ℓ+1 depth slices that it forces.
        #[arg(long)]
        triple: Option<PathBuf>,
    },
    /// Invertibility test and inverse recovery for a pair file {"A": ..., "B": ...}.
    InversePair { input: PathBuf },
    /// Nullity certificate.
    Nullity {
        input: PathBuf,
        #[arg(long, value_enum, default_value_t = NullityStrategy::ViaRank)]
        strategy: NullityStrategy,
        /// Decomposition of the depth-minimal transpose of the input, for via-rank.
        #[arg(long)]
        triple: Option<PathBuf>,
    },
    /// Runs a self-check suite.
    Verify {
        #[arg(value_enum, default_value_t = verify::Suite::All)]
        suite: verify::Suite,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum RankStrategy {
    MinBound,
    ExhaustiveGf,
    GenericPipeline,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum Notion {
    Pivoted,
    Nontrivial,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum NullityStrategy {
    ViaRank,
    DirectSearch,
}

/// Resolved run settings.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub domain: Option<ScalarDomain>,
    pub solver: SolverConfig,
    pub budget: u64,
    pub tau: Option<usize>,
}

/// A failure with its process exit code.
#[derive(Debug)]
pub struct CliError {
    pub code: u8,
    pub kind: &'static str,
    pub message: String,
}

impl CliError {
    pub fn parse(message: impl Into<String>) -> Self {
        CliError { code: 2, kind: "parse", message: message.into() }
    }
}

impl From<hyperbm::Error> for CliError {
    fn from(e: hyperbm::Error) -> Self {
        use hyperbm::Error as E;
        let (code, kind) = match &e {
            E::Parse(_) | E::Scalar(_) => (2, "parse"),
            E::Conformability(_) | E::Shape(_) => (3, "conformability"),
            E::Budget { .. } => (4, "budget"),
            E::Verification(_) => (5, "verification"),
            E::Precondition(_) | E::Hypothesis(_) | E::NotInvertible(_) | E::Completion(_) => (6, "precondition"),
            E::Index(_) => (1, "index"),
        };
        CliError { code, kind, message: e.to_string() }
    }
}

impl From<hyperbm::scalar::ScalarError> for CliError {
    fn from(e: hyperbm::scalar::ScalarError) -> Self {
        CliError::from(hyperbm::Error::from(e))
    }
}

fn run_config(a: &RunArgs) -> Result<RunConfig, CliError> {
    if !(a.tol >= 0.0 && a.tol.is_finite()) {
        return Err(CliError::parse(format!("--tol must be a finite number >= 0, got {}", a.tol)));
    }
    if a.restarts == 0 || a.iters == 0 || a.budget == 0 {
        return Err(CliError::parse("--restarts, --iters and --budget must be at least 1"));
    }
    let domain = a.domain.as_deref().map(|s| ScalarDomain::parse(s, Some(a.tol))).transpose()?;
    Ok(RunConfig {
        domain,
        solver: SolverConfig { tol: a.tol, restarts: a.restarts, iters: a.iters, seed: a.seed },
        budget: a.budget,
        tau: a.tau,
    })
}

fn log(line: serde_json::Value) {
    eprintln!("{line}");
}

fn dispatch(cli: &Cli) -> Result<(serde_json::Value, u8), CliError> {
    let cfg = run_config(&cli.run)?;
    let value = match &cli.command {
        Command::Prod { a0, a1, a2, background } => commands::prod(&cfg, [a0, a1, a2], background.as_deref())?,
        Command::Rank { input, strategy } => commands::rank(&cfg, input, *strategy)?,
        Command::Dependence { input, size, notion, triple } => commands::dependence(&cfg, input, *size, *notion, triple.as_deref())?,
        Command::InversePair { input } => commands::inverse_pair(&cfg, input)?,
        Command::Nullity { input, strategy, triple } => commands::nullity(&cfg, input, *strategy, triple.as_deref())?,
        Command::Verify { suite } => {
            let report = verify::run(*suite, cfg.solver.seed);
            let code = if report["pass"] == json!(true) { 0 } else { 5 };
            return Ok((report, code));
        }
    };
    Ok((value, 0))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(&cli) {
        Ok((value, code)) => {
            let text = hyperbm::io::render(&value);
            match &cli.run.out {
                Some(path) => {
                    if let Err(e) = std::fs::write(path, text) {
                        log(json!({"level": "error", "kind": "io", "exit_code": 1, "message": format!("{}: {e}", path.display())}));
                        return ExitCode::from(1);
                    }
                    log(json!({"level": "info", "event": "wrote", "path": path.display().to_string()}));
                }
                None => print!("{text}"),
            }
            if code != 0 {
                log(json!({"level": "error", "kind": "verification", "exit_code": code, "message": "self-check suite failed"}));
            }
            ExitCode::from(code)
        }
        Err(e) => {
            log(json!({"level": "error", "kind": e.kind, "exit_code": e.code, "message": e.message}));
            ExitCode::from(e.code)
        }
    }
}
