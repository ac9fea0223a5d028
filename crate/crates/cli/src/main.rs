mod commands;
mod input;

use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use input::ProfileArgs;
use relaynet::scheme::Technique;
use relaynet::Topology;

/// Worker threads for parallel sweeps; defaults to one per core.
pub const WORKERS_ENV: &str = "RELAYNET_WORKERS";

#[derive(Parser, Debug)]
#[command(name = "relaynet", version, about = "Deterministic two-stage relay-interference networks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Capacity region of a ZS or ZZ profile
    Region {
        #[command(flatten)]
        profile: ProfileArgs,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Check a scheme file at a rate pair
    Verify {
        /// Scheme JSON as written by `search` or `demo`
        #[arg(long, value_name = "FILE")]
        scheme: PathBuf,
        /// Profile flags override the profile stored in the scheme file
        #[command(flatten)]
        profile: ProfileArgs,
        /// Defaults to the scheme's own rates
        #[arg(long)]
        r1: Option<usize>,
        #[arg(long)]
        r2: Option<usize>,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Search for a one-shot linear scheme at a rate pair
    Search {
        #[command(flatten)]
        profile: ProfileArgs,
        #[arg(long)]
        r1: usize,
        #[arg(long)]
        r2: usize,
        #[command(flatten)]
        budget: BudgetArgs,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Walk through one of the four interference-management examples
    Demo {
        technique: Technique,
        /// Sample W1 bits, e.g. 1
        #[arg(long)]
        w1: Option<String>,
        /// Sample W2 bits, e.g. 10
        #[arg(long)]
        w2: Option<String>,
        /// Write the scheme JSON here instead of after the transcript
        #[arg(long, value_name = "FILE")]
        output: Option<PathBuf>,
    },
    /// Compare the searched region with the closed form on every profile
    Check {
        #[arg(long)]
        topology: Topology,
        #[arg(long)]
        q: usize,
        #[command(flatten)]
        budget: BudgetArgs,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Region boundary points over a grid of profiles
    Sweep {
        #[command(flatten)]
        profile: ProfileArgs,
        /// Grid axis NAME=LO..HI (inclusive), e.g. m12=0..3; repeatable
        #[arg(long, value_name = "NAME=LO..HI")]
        vary: Vec<String>,
        #[command(flatten)]
        out: OutputArgs,
    },
}

#[derive(Args, Debug, Clone)]
struct OutputArgs {
    /// Defaults to json, or csv for `sweep`
    #[arg(long, value_enum)]
    format: Option<Format>,
    /// Write to a file instead of stdout
    #[arg(long, value_name = "FILE")]
    output: Option<PathBuf>,
}

#[derive(Args, Debug, Clone)]
struct BudgetArgs {
    /// Enumerate the whole canonical space (a miss is then a proof)
    #[arg(long, conflicts_with = "candidates")]
    exhaustive: bool,
    /// Randomized search with this many candidate evaluations
    #[arg(long)]
    candidates: Option<u64>,
    /// Largest canonical space an exhaustive search may enumerate
    #[arg(long)]
    ceiling: Option<u128>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

/// Error with its exit code.
#[derive(Debug)]
pub enum Failure {
    /// Exit 1.
    Input(String),
    /// Exit 2.
    Unsupported(String),
    /// Exit 3.
    Verification(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Input(_) => 1,
            Failure::Unsupported(_) => 2,
            Failure::Verification(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Input(m) | Failure::Unsupported(m) | Failure::Verification(m) => m,
        }
    }
}

impl From<relaynet::Error> for Failure {
    fn from(e: relaynet::Error) -> Self {
        use relaynet::Error as E;
        match e {
            E::WrongTopology { .. } | E::UnsupportedTopology(_) | E::BudgetExceeded { .. } => {
                Failure::Unsupported(e.to_string())
            }
            E::InfeasibleRate { .. } | E::SearchFailed { .. } | E::RegimeMismatch { .. } => {
                Failure::Verification(e.to_string())
            }
            _ => Failure::Input(e.to_string()),
        }
    }
}

fn emit(out: Option<&PathBuf>, text: &str) -> Result<(), Failure> {
    let mut text = text.to_string();
    if !text.ends_with('\n') {
        text.push('\n');
    }
    match out {
        Some(path) => fs::write(path, text).map_err(|e| Failure::Input(format!("{}: {e}", path.display()))),
        None => {
            let mut stdout = std::io::stdout().lock();
            match stdout.write_all(text.as_bytes()).and_then(|()| stdout.flush()) {
                Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => Err(Failure::Input(format!("stdout: {e}"))),
                _ => Ok(()),
            }
        }
    }
}

fn configure_workers() -> Result<(), Failure> {
    let Ok(value) = std::env::var(WORKERS_ENV) else {
        return Ok(());
    };
    let n: usize = value
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| Failure::Input(format!("{WORKERS_ENV} must be a positive integer, got {value:?}")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| Failure::Input(e.to_string()))
}

fn run(cli: Cli) -> Result<(), Failure> {
    configure_workers()?;
    match cli.command {
        Command::Region { profile, out } => commands::region(&profile.resolve()?, &out),
        Command::Verify {
            scheme,
            profile,
            r1,
            r2,
            out,
        } => commands::verify(&scheme, &profile, r1, r2, &out),
        Command::Search {
            profile,
            r1,
            r2,
            budget,
            out,
        } => commands::search(&profile.resolve()?, r1, r2, &budget, &out),
        Command::Demo {
            technique,
            w1,
            w2,
            output,
        } => commands::demo(technique, w1.as_deref(), w2.as_deref(), output.as_ref()),
        Command::Check { topology, q, budget, out } => commands::check(topology, q, &budget, &out),
        Command::Sweep { profile, vary, out } => commands::sweep(&profile.resolve()?, &vary, &out),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message());
            ExitCode::from(f.code())
        }
    }
}
