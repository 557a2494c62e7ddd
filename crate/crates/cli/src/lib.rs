//! The `netpool` command line.
//!
//! Every subcommand writes a CSV whose leading `#` lines echo the resolved
//! configuration as TOML; `netpool replay` feeds that echo back in and
//! reproduces the file byte for byte.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};

pub mod args;
pub mod commands;
pub mod output;

pub use args::{GroupRange, SizeList, StrategyList};

/// Exit status for success.
pub const EXIT_OK: u8 = 0;
/// Bad flags or parameters the model rejects.
pub const EXIT_PARAMETER: u8 = 1;
/// Unreadable or malformed input files.
pub const EXIT_INPUT: u8 = 2;
/// `verify` found a violated inequality or identity.
pub const EXIT_VIOLATION: u8 = 3;

#[derive(Debug, Parser)]
#[command(name = "netpool", version, about = "Network-aware group testing experiments")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, PartialEq, Subcommand, Serialize, Deserialize)]
#[serde(tag = "command", rename_all = "kebab-case")]
pub enum Command {
    /// Closed-form expected tests over a range of group sizes
    Analytic(commands::analytic::AnalyticArgs),
    /// Monte Carlo outbreaks and two-stage screens on a network
    Simulate(commands::simulate::SimulateArgs),
    /// Louvain communities (or a given partition) with block densities
    Communities(commands::communities::CommunitiesArgs),
    /// Group size minimizing each closed form
    Optimize(commands::optimize::OptimizeArgs),
    /// Check the network-grouping sandwich and monotonicity over a random grid
    Verify(commands::verify::VerifyArgs),
    /// Write a stochastic block model as an edge list and partition
    Generate(commands::generate::GenerateArgs),
    /// Re-run the configuration echoed at the top of an output file
    #[serde(skip)]
    Replay(ReplayArgs),
}

/// Where the primary CSV goes. Never part of the echoed configuration.
#[derive(Debug, Clone, Default, PartialEq, Args)]
pub struct OutputArgs {
    /// Output file (stdout when omitted)
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Also write a gnuplot script plotting the output
    #[arg(long, value_name = "SCRIPT")]
    pub gnuplot: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq, Args)]
pub struct ReplayArgs {
    /// A CSV written by netpool
    pub file: PathBuf,
    #[command(flatten)]
    pub output: OutputArgs,
    /// For `simulate`: also write per-replicate rows here
    #[arg(long)]
    pub replicates: Option<PathBuf>,
}

/// A failed command: message for stderr and the exit status.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Failure {
    pub code: u8,
    pub message: String,
}

impl Failure {
    pub fn parameter(message: impl Into<String>) -> Self {
        Self {
            code: EXIT_PARAMETER,
            message: message.into(),
        }
    }

    pub fn input(message: impl Into<String>) -> Self {
        Self {
            code: EXIT_INPUT,
            message: message.into(),
        }
    }
}

impl From<netpool::Error> for Failure {
    fn from(e: netpool::Error) -> Self {
        use netpool::Error as E;
        let code = match e {
            E::InvalidParameters(_)
            | E::DegenerateModel
            | E::AlphaOutOfRange(_)
            | E::Divisibility(_)
            | E::EmptyRange
            | E::RangeOutOfBounds { .. }
            | E::NoReplicates => EXIT_PARAMETER,
            E::Parse { .. }
            | E::EmptyInput
            | E::DegeneratePartition(_)
            | E::InvalidNetwork(_)
            | E::InvalidPartition(_)
            | E::Csv(_)
            | E::Io(_) => EXIT_INPUT,
        };
        Self {
            code,
            message: e.to_string(),
        }
    }
}

pub type CliResult<T> = Result<T, Failure>;

/// Parses `argv` and runs it. Returns the process exit status.
pub fn run<I, T>(argv: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_PARAMETER } else { EXIT_OK };
            let rendered = e.render().to_string();
            let sink: &mut dyn Write = if e.use_stderr() { stderr } else { stdout };
            let _ = sink.write_all(rendered.as_bytes());
            return code;
        }
    };
    match execute(cli.command, stdout, stderr) {
        Ok(code) => code,
        Err(failure) => {
            let _ = writeln!(stderr, "error: {}", failure.message);
            failure.code
        }
    }
}

/// Runs a parsed command.
pub fn execute(command: Command, stdout: &mut dyn Write, stderr: &mut dyn Write) -> CliResult<u8> {
    match command {
        Command::Analytic(a) => commands::analytic::run(a, stdout, stderr),
        Command::Simulate(a) => commands::simulate::run(a, stdout, stderr),
        Command::Communities(a) => commands::communities::run(a, stdout, stderr),
        Command::Optimize(a) => commands::optimize::run(a, stdout, stderr),
        Command::Verify(a) => commands::verify::run(a, stdout, stderr),
        Command::Generate(a) => commands::generate::run(a, stdout, stderr),
        Command::Replay(a) => replay(a, stdout, stderr),
    }
}

fn replay(args: ReplayArgs, stdout: &mut dyn Write, stderr: &mut dyn Write) -> CliResult<u8> {
    let text = std::fs::read_to_string(&args.file)
        .map_err(|e| Failure::input(format!("{}: {e}", args.file.display())))?;
    let mut command = output::parse_echo(&text)?;
    match &mut command {
        Command::Analytic(a) => a.output = args.output,
        Command::Simulate(a) => {
            a.output = args.output;
            a.replicates = args.replicates;
        }
        Command::Communities(a) => a.output = args.output,
        Command::Optimize(a) => a.output = args.output,
        Command::Verify(a) => a.output = args.output,
        Command::Generate(a) => a.output = args.output,
        Command::Replay(_) => return Err(Failure::input("a replay cannot replay itself")),
    }
    execute(command, stdout, stderr)
}

/// Fills in an omitted `--seed` with 0 and says so on stderr.
pub(crate) fn resolve_seed(seed: &mut Option<u64>, stderr: &mut dyn Write) -> u64 {
    *seed.get_or_insert_with(|| {
        let _ = writeln!(stderr, "notice: no --seed given, using seed 0");
        0
    })
}
