mod commands;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use nclcs_core::lcs::{LcsConfig, DEFAULT_BUDGET};
use nclcs_core::Error;

use commands::{Outcome, Suite};

/// Lower central series of free algebras, polynomial forms, and characters.
#[derive(Parser, Debug)]
#[command(name = "nclcs", version)]
struct Cli {
    #[command(flatten)]
    global: GlobalArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct GlobalArgs {
    /// Field for rank computations
    #[arg(long, value_enum, default_value_t = FieldMode::Prime, global = true)]
    field: FieldMode,
    /// Modulus in prime mode; must be one of the built-in 31-bit primes
    #[arg(long, global = true)]
    prime: Option<u32>,
    /// Worker threads
    #[arg(long, global = true, value_parser = clap::value_parser!(u16).range(1..))]
    threads: Option<u16>,
    /// Directory for cached filtration cells
    #[arg(long, env = "NCLCS_CACHE_DIR", global = true)]
    cache_dir: Option<PathBuf>,
    /// Seed for random suites and for choosing primes in two-prime mode
    #[arg(long, default_value_t = 0, global = true)]
    seed: u64,
    /// Largest allowed ambient dimension n^len
    #[arg(long, default_value_t = DEFAULT_BUDGET, global = true)]
    budget: u64,
    /// Output format
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum FieldMode {
    Prime,
    TwoPrime,
    Rational,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Bigraded table of dim A_{n,k}^len
    Hilbert {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        max_len: usize,
        /// Only compute k <= k_max
        #[arg(long)]
        k_max: Option<usize>,
    },
    /// Run a verification suite
    Verify {
        #[arg(value_enum)]
        suite: Suite,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        max_len: Option<usize>,
        /// Number of random cases for seeded suites
        #[arg(long)]
        cases: Option<usize>,
    },
    /// Schur decompositions of A_{n,k}^len and coinduced fits of the row
    Chars {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        max_len: usize,
    },
}

const EXIT_VERIFY: u8 = 1;
const EXIT_BUDGET: u8 = 2;
const EXIT_USAGE: u8 = 64;
const EXIT_CACHE: u8 = 65;

fn exit_code_for(err: &Error) -> u8 {
    match err {
        Error::BudgetExceeded { .. } => EXIT_BUDGET,
        Error::CacheCorrupt { .. } => EXIT_CACHE,
        Error::InvalidArgument(_) | Error::UnsupportedPrime(_) | Error::InvalidLetter { .. } => EXIT_USAGE,
        _ => EXIT_VERIFY,
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(EXIT_USAGE) } else { ExitCode::SUCCESS };
        }
    };
    let g = &cli.global;
    let config = LcsConfig { budget: g.budget, cache_dir: g.cache_dir.clone(), ..LcsConfig::default() };
    let run = commands::Runner { mode: g.field, prime: g.prime, seed: g.seed, format: g.format, config };

    let result = match g.threads {
        Some(t) => match rayon::ThreadPoolBuilder::new().num_threads(t as usize).build() {
            Ok(pool) => pool.install(|| dispatch(&run, &cli.command)),
            Err(e) => Err(Error::InvalidArgument(format!("cannot start {t} threads: {e}"))),
        },
        None => dispatch(&run, &cli.command),
    };

    match result {
        Ok(Outcome { output, passed }) => {
            let mut stdout = std::io::stdout().lock();
            if stdout.write_all(output.as_bytes()).and_then(|_| stdout.flush()).is_err() {
                return ExitCode::from(EXIT_VERIFY);
            }
            if passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(EXIT_VERIFY)
            }
        }
        Err(e) => {
            match &e {
                Error::CacheCorrupt { path, reason } => {
                    eprintln!("error: corrupt cache file {}: {reason}", path.display())
                }
                other => eprintln!("error: {other}"),
            }
            ExitCode::from(exit_code_for(&e))
        }
    }
}

fn dispatch(run: &commands::Runner, command: &Command) -> nclcs_core::Result<Outcome> {
    match *command {
        Command::Hilbert { n, max_len, k_max } => run.hilbert(n, max_len, k_max),
        Command::Verify { suite, n, max_len, cases } => run.verify(suite, n, max_len, cases),
        Command::Chars { n, k, max_len } => run.chars(n, k, max_len),
    }
}
