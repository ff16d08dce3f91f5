//! Command-line front end: argument model, commands and report rendering.

pub mod commands;
pub mod config;
pub mod report;

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

pub use commands::{reproduce, CommandResult, Output};
pub use config::{OutputFormat, PolicyArg, RunConfig};
pub use report::{ReportDocument, TypeEntry};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("usage: {0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] apsieve_core::Error),
    #[error("cannot write output: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        2
    }
}

#[derive(Debug, Parser)]
#[command(name = "apsieve", version, about = "Arithmetic sieve for the types of finite A_p-spaces")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct GlobalArgs {
    /// Odd prime.
    #[arg(long, global = true, default_value_t = 3)]
    pub p: u64,
    #[arg(long, global = true, default_value_t = 3)]
    pub rank: usize,
    /// Enumeration cap on half-degrees.
    #[arg(long, global = true, default_value_t = 60)]
    pub max_half_degree: u32,
    #[arg(long, global = true, value_enum, default_value_t = PolicyArg::Standard)]
    pub window_policy: PolicyArg,
    /// Cross-check every valuation sum against the big-integer gcd oracle.
    #[arg(long, global = true)]
    pub oracle: bool,
    #[arg(long, global = true, default_value_t = 50)]
    pub k_max: u64,
    /// Worker threads; 0 picks the number of CPUs.
    #[arg(long, global = true, default_value_t = 0)]
    pub workers: usize,
    #[arg(long, global = true, value_enum, default_value_t = OutputFormat::Json)]
    pub format: OutputFormat,
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
}

impl GlobalArgs {
    pub fn config(&self) -> RunConfig {
        RunConfig {
            p: self.p,
            rank: self.rank,
            max_half_degree: self.max_half_degree,
            window_policy: self.window_policy,
            oracle: self.oracle,
            k_max: self.k_max,
            workers: self.workers,
            format: self.format,
            out: self.out.clone(),
        }
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// p-adic valuation e(n).
    Val {
        #[arg(allow_hyphen_values = true)]
        n: i64,
    },
    /// Valuation of k0^n - 1 for a primitive root k0 mod p^2.
    Nu {
        #[arg(allow_hyphen_values = true)]
        n: i64,
    },
    /// Base-p digit sum.
    Digitsum { n: u64 },
    /// e(n!).
    Valfact { n: u64 },
    /// e, nu, digit sum and e(n!) together.
    Valuations { n: u64 },
    /// Full verdict for one type, e.g. `4,8,12`.
    CheckType { degrees: String },
    /// Adem expansion of P^a P^b.
    Adem { a: u32, b: u32 },
    /// Degree bound for the configured prime and rank.
    Bound,
    /// Regenerate a reference table: thm1.1-demo, prop1..prop4, thm1.2,
    /// lemma3.4, adem, bound.
    Reproduce { target: String },
}

pub fn run(cfg: &RunConfig, command: &Command) -> Result<CommandResult, CliError> {
    use commands::Scalar;
    match command {
        Command::Val { n } => commands::cmd_scalar(cfg, Scalar::Val, *n),
        Command::Nu { n } => commands::cmd_scalar(cfg, Scalar::Nu, *n),
        Command::Digitsum { n } => commands::cmd_scalar(cfg, Scalar::DigitSum, *n as i64),
        Command::Valfact { n } => commands::cmd_scalar(cfg, Scalar::ValFact, *n as i64),
        Command::Valuations { n } => commands::cmd_valuations(cfg, *n),
        Command::CheckType { degrees } => commands::cmd_check_type(cfg, degrees),
        Command::Adem { a, b } => commands::cmd_adem(cfg, *a, *b),
        Command::Bound => commands::cmd_bound(cfg),
        Command::Reproduce { target } => reproduce(cfg, target),
    }
}

/// Runs a command with the configured thread pool and returns the rendered
/// output and exit code.
pub fn execute(cfg: &RunConfig, command: &Command) -> Result<(String, i32), CliError> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.workers)
        .build()
        .map_err(|e| CliError::Usage(format!("cannot start {} workers: {e}", cfg.workers)))?;
    let result = pool.install(|| run(cfg, command))?;
    Ok((result.render(), result.exit_code))
}
