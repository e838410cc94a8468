use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

mod commands;
mod error;

use error::CliError;

/// Environment variable naming the obf cache file.
pub const CACHE_ENV: &str = "LAMINAR_CACHE";
const DEFAULT_CACHE: &str = "laminar-obf.tsv";

#[derive(Parser, Debug)]
#[command(name = "laminar", version, about = "Constructions, exact search and LP upper bounds for t-laminar families")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
struct Common {
    /// Emit JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
}

#[derive(Args, Debug, Clone)]
struct CacheArgs {
    /// Cache file for obf values; defaults to $LAMINAR_CACHE, then ./laminar-obf.tsv.
    #[arg(long)]
    cache: Option<PathBuf>,
    /// Neither read nor write a cache.
    #[arg(long, conflicts_with = "cache")]
    no_cache: bool,
}

impl CacheArgs {
    fn path(&self) -> Option<PathBuf> {
        if self.no_cache {
            return None;
        }
        self.cache
            .clone()
            .or_else(|| std::env::var_os(CACHE_ENV).map(PathBuf::from))
            .or_else(|| Some(PathBuf::from(DEFAULT_CACHE)))
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Build or extend the obf table to N and report the upper bound.
    Obf {
        #[arg(long = "N", visible_alias = "n")]
        big_n: usize,
        #[command(flatten)]
        cache: CacheArgs,
        /// Scan max over m in floating point and recheck candidates exactly.
        #[arg(long, overrides_with = "no_prefilter")]
        prefilter: bool,
        #[arg(long, overrides_with = "prefilter")]
        no_prefilter: bool,
        #[command(flatten)]
        common: Common,
    },
    /// Build a design or tower family, validate it and write it to a file.
    Construct {
        kind: ConstructKind,
        /// Tower level.
        #[arg(long, default_value_t = 0)]
        r: u32,
        /// Plane or circle geometry order.
        #[arg(long)]
        q: Option<u64>,
        /// Output file; `.json` selects JSON, anything else the text form.
        #[arg(long, short)]
        out: Option<PathBuf>,
        /// Allow materializing large tower levels (millions of sets).
        #[arg(long)]
        materialize: bool,
        /// Report tower counts without building the family.
        #[arg(long)]
        counts_only: bool,
        #[command(flatten)]
        common: Common,
    },
    /// Check t-laminarity of a family file three ways.
    Verify {
        file: PathBuf,
        /// Defaults to the `t=` in the file header.
        #[arg(long)]
        t: Option<usize>,
        #[command(flatten)]
        common: Common,
    },
    /// Exact maximum t-laminar family by clique search.
    Search {
        #[arg(long = "n", visible_alias = "N")]
        n: usize,
        #[arg(long, default_value_t = 2)]
        t: usize,
        /// Time budget in seconds.
        #[arg(long, default_value_t = 60)]
        budget: u64,
        /// Count every member of size at least t, including singletons when t = 1.
        #[arg(long)]
        all_sizes: bool,
        /// Also check construction <= search <= obf(n).
        #[arg(long)]
        gap: bool,
        #[command(flatten)]
        common: Common,
    },
    /// Reconcile the best lower and upper bounds on the limiting ratio.
    Summary {
        #[command(flatten)]
        cache: CacheArgs,
        #[command(flatten)]
        common: Common,
    },
    /// Greedy t-(n,k,1) packing.
    Packing {
        #[arg(long = "n", visible_alias = "N")]
        n: usize,
        #[arg(long)]
        k: usize,
        #[arg(long, default_value_t = 2)]
        t: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, short)]
        out: Option<PathBuf>,
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum ConstructKind {
    FanoTower,
    CircleTower,
    Affine,
    Projective,
    Circle,
}

fn run(cli: Cli) -> Result<ExitCode, CliError> {
    match cli.command {
        Command::Obf {
            big_n,
            cache,
            prefilter,
            no_prefilter,
            common,
        } => commands::obf(big_n, cache.path(), prefilter && !no_prefilter, common.json),
        Command::Construct {
            kind,
            r,
            q,
            out,
            materialize,
            counts_only,
            common,
        } => commands::construct(kind, r, q, out, materialize, counts_only, common.json),
        Command::Verify { file, t, common } => commands::verify(&file, t, common.json),
        Command::Search {
            n,
            t,
            budget,
            all_sizes,
            gap,
            common,
        } => commands::search(n, t, budget, all_sizes, gap, common.json),
        Command::Summary { cache, common } => commands::summary(cache.path(), common.json),
        Command::Packing {
            n,
            k,
            t,
            seed,
            out,
            common,
        } => commands::packing(n, k, t, seed, out, common.json),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
