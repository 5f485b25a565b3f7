//! `minorforge`: batch front end for proxy search, level generation and the
//! excluded-minor sieve.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Args, CommandFactory, Parser, Subcommand};

/// `println!` that ends the process quietly once stdout is closed.
macro_rules! emit {
    ($($t:tt)*) => {{
        use std::io::Write as _;
        if writeln!(std::io::stdout(), $($t)*).is_err() {
            std::process::exit(0);
        }
    }};
}

mod commands;

const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Parser)]
#[command(name = "minorforge", version, about = "Exhaustive search for matroids over partial fields")]
pub struct Cli {
    /// Store directory for levels, sieve results and logs.
    #[arg(long, global = true, env = "MINORFORGE_STORE")]
    pub store: Option<PathBuf>,
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    pub jobs: Option<usize>,
    /// Log debug detail.
    #[arg(short, long, global = true)]
    pub verbose: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct EngineArgs {
    /// Built-in class name or path to a class TOML stanza.
    #[arg(long, default_value = "dyadic")]
    pub class: String,
    /// Group files used by the isomorph filter.
    #[arg(long, default_value_t = 127)]
    pub groups: usize,
    /// Records held in memory before spilling to group files.
    #[arg(long, default_value_t = 100_000)]
    pub batch_size: usize,
    /// Check confinement on the precomputed hyperlines only.
    #[arg(long)]
    pub fast_confinement: bool,
    /// Largest prime tried when a class config has no proxy stanza.
    #[arg(long, default_value_t = minorforge::pfield::DEFAULT_PRIME_CEILING)]
    pub prime_ceiling: u32,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Find or verify a finite-field proxy.
    #[command(subcommand)]
    Proxy(ProxyCommand),
    /// Generate every level of a class up to `--max-n`.
    Generate {
        #[command(flatten)]
        engine: EngineArgs,
        #[arg(long)]
        max_n: usize,
    },
    /// Excluded minors of a class with at most `--max-n` elements.
    Excluded {
        #[command(flatten)]
        engine: EngineArgs,
        #[arg(long)]
        max_n: usize,
    },
    /// Per-rank member counts of every complete level, as TSV.
    Counts {
        #[arg(long, default_value = "dyadic")]
        class: String,
    },
    /// Named matroids.
    #[command(subcommand)]
    Catalog(CatalogCommand),
    /// Decide isomorphism of two matroids.
    Iso { a: String, b: String },
    /// Decide whether `minor` is isomorphic to a minor of `m`.
    Minor { m: String, minor: String },
    /// The Delta-Y class of a matroid, up to isomorphism.
    Deltay {
        m: String,
        /// Leave duals out of the closure.
        #[arg(long)]
        no_duals: bool,
    },
    /// Search extensions of level-`n` members for excluded minors with two
    /// disjoint circuit-hyperplanes.
    Chhunt {
        #[arg(long, default_value = "dyadic")]
        class: String,
        #[arg(long)]
        n: usize,
    },
    /// Check the base excluded-minor list of a class.
    VerifyBase {
        #[arg(long, default_value = "dyadic")]
        class: String,
    },
}

#[derive(Debug, Subcommand)]
pub enum ProxyCommand {
    /// The proxy over the smallest admissible prime.
    Find {
        /// Built-in partial field name or path to a presentation TOML.
        #[arg(long)]
        pf: String,
        #[arg(long, default_value_t = minorforge::pfield::DEFAULT_PRIME_CEILING)]
        prime_ceiling: u32,
        /// Height bound for the fundamental enumeration.
        #[arg(long, default_value_t = minorforge::pfield::DEFAULT_BOUND)]
        bound: i32,
        /// Also report why each smaller prime fails.
        #[arg(long)]
        explain: bool,
    },
    /// Check a given field and image tuple.
    Verify {
        #[arg(long)]
        pf: String,
        #[arg(long)]
        q: u32,
        /// Comma-separated generator images, in presentation order.
        #[arg(long, value_delimiter = ',')]
        images: Vec<u32>,
        #[arg(long, default_value_t = minorforge::pfield::DEFAULT_BOUND)]
        bound: i32,
    },
}

#[derive(Debug, Subcommand)]
pub enum CatalogCommand {
    List,
    Show { name: String },
}

/// Why a command did not succeed.
#[derive(Debug)]
pub enum Failure {
    Usage(String),
    Domain(String),
}

impl From<minorforge::Error> for Failure {
    fn from(e: minorforge::Error) -> Failure {
        Failure::Domain(e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(j) = cli.jobs {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(j).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    }
    match commands::run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => Cli::command().error(ErrorKind::MissingRequiredArgument, msg).exit(),
        Err(Failure::Domain(msg)) => {
            log::error!("{msg}");
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}
