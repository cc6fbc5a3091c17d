mod cache;
mod ops;
mod render;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use rsboole_core::{Error, DEFAULT_FIELD_CAP, DEFAULT_MATRIX_CAP, DEFAULT_TABLE_CAP};

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Table,
}

impl Format {
    fn name(self) -> &'static str {
        match self {
            Format::Json => "json",
            Format::Csv => "csv",
            Format::Table => "table",
        }
    }
}

/// Resource limits shared by every subcommand.
pub struct RunConfig {
    pub max_table_n: u32,
    pub max_field_n: u32,
    pub max_matrix_size: usize,
    pub seed: u64,
}

#[derive(Parser)]
#[command(
    name = "rsboole",
    version,
    about = "analysis toolkit for quadratic rotation-symmetric Boolean functions"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// output format
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,

    /// directory for content-addressed result caching
    #[arg(long, global = true, env = "RSBOOLE_CACHE_DIR")]
    cache_dir: Option<PathBuf>,

    /// bypass the cache even when a directory is configured
    #[arg(long, global = true)]
    no_cache: bool,

    /// largest n for truth-table work (each table holds 2^n bits)
    #[arg(long, global = true, env = "RSBOOLE_MAX_TABLE_N", default_value_t = DEFAULT_TABLE_CAP)]
    max_table_n: u32,

    /// largest extension degree for finite-field work
    #[arg(long, global = true, default_value_t = DEFAULT_FIELD_CAP)]
    max_field_n: u32,

    /// largest recursion-matrix dimension
    #[arg(long, global = true, default_value_t = DEFAULT_MATRIX_CAP)]
    max_matrix_size: usize,

    /// seed for the randomized self-test checks
    #[arg(long, global = true, default_value_t = 42)]
    seed: u64,
}

#[derive(Subcommand)]
enum Command {
    /// Weight, spectrum summary, plateau parameter, and balance class at one n
    Analyze {
        /// comma-separated offsets, e.g. 1,2
        #[arg(long, value_delimiter = ',', required = true)]
        terms: Vec<u32>,
        #[arg(long)]
        n: u32,
    },
    /// Least period of the v-value sequence, with factorization evidence
    Period {
        #[arg(long, value_delimiter = ',', required = true)]
        terms: Vec<u32>,
    },
    /// Closed-form balance prediction, optionally checked against truth tables
    Balance {
        #[arg(long, value_delimiter = ',', required = true)]
        terms: Vec<u32>,
        /// single n to predict at
        #[arg(long, conflicts_with = "n_max")]
        n: Option<u32>,
        /// predict at every n from 2J+1 up to this bound
        #[arg(long)]
        n_max: Option<u32>,
        /// verify each prediction against the exhaustive weight
        #[arg(long)]
        check: bool,
    },
    /// Weight of the trace form over F_2^n, compared with the table route
    Trace {
        #[arg(long, value_delimiter = ',', required = true)]
        terms: Vec<u32>,
        #[arg(long)]
        n: u32,
    },
    /// Recursion matrix: characteristic polynomial, Hadamard power, trace identity
    Rules {
        /// larger offset
        #[arg(long)]
        i: u32,
        /// smaller offset; omit for a single-offset function
        #[arg(long)]
        j: Option<u32>,
        /// verify trace(R^n) = 2^n - 2*weight for n up to this bound
        #[arg(long)]
        n_max: Option<u32>,
        /// claimed multiplicative order of R / sqrt(2)
        #[arg(long)]
        check: Option<u64>,
    },
    /// Scaled cyclotomic polynomials: reducibility criterion and explicit splits
    Cyclo {
        /// comma-separated square-free scalings
        #[arg(long, value_delimiter = ',', required = true)]
        d: Vec<i64>,
        /// single index (requires exactly one scaling)
        #[arg(long, conflicts_with = "n_max")]
        n: Option<u32>,
        /// sweep every index up to this bound for each scaling
        #[arg(long)]
        n_max: Option<u32>,
    },
    /// Fast end-to-end consistency pass over worked examples
    Selftest,
}

impl Command {
    /// Stable textual identity used as the cache key material.
    fn canonical(&self) -> String {
        fn terms_key(terms: &[u32]) -> String {
            let mut t = terms.to_vec();
            t.sort_unstable();
            t.dedup();
            format!("{t:?}")
        }
        match self {
            Command::Analyze { terms, n } => format!("analyze terms={} n={n}", terms_key(terms)),
            Command::Period { terms } => format!("period terms={}", terms_key(terms)),
            Command::Balance {
                terms,
                n,
                n_max,
                check,
            } => format!(
                "balance terms={} n={n:?} n_max={n_max:?} check={check}",
                terms_key(terms)
            ),
            Command::Trace { terms, n } => format!("trace terms={} n={n}", terms_key(terms)),
            Command::Rules { i, j, n_max, check } => {
                format!("rules i={i} j={j:?} n_max={n_max:?} check={check:?}")
            }
            Command::Cyclo { d, n, n_max } => format!("cyclo d={d:?} n={n:?} n_max={n_max:?}"),
            Command::Selftest => "selftest".into(),
        }
    }

    fn cacheable(&self) -> bool {
        !matches!(self, Command::Selftest)
    }
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::InvalidArgument(_) | Error::Parse(_) | Error::Unsupported(_) => 2,
        Error::ResourceLimit(_) | Error::SignUndetermined { .. } => 3,
        Error::Inconsistency(_) | Error::NotPlateaued(_) => 4,
    }
}

/// Rendered output plus the process exit code (nonzero only for self-test
/// failures, which still print their report).
fn execute(cli: &Cli, cfg: &RunConfig) -> Result<(String, u8), Error> {
    match &cli.command {
        Command::Analyze { terms, n } => {
            let report = ops::analyze(cfg, terms, *n)?;
            Ok((render::render(&report, cli.format)?, 0))
        }
        Command::Period { terms } => {
            let report = ops::period(terms)?;
            Ok((render::render(&report, cli.format)?, 0))
        }
        Command::Balance {
            terms,
            n,
            n_max,
            check,
        } => {
            let report = ops::balance(cfg, terms, *n, *n_max, *check)?;
            Ok((render::render(&report, cli.format)?, 0))
        }
        Command::Trace { terms, n } => {
            let report = ops::trace(cfg, terms, *n)?;
            Ok((render::render(&report, cli.format)?, 0))
        }
        Command::Rules { i, j, n_max, check } => {
            let report = ops::rules(cfg, *i, *j, *n_max, *check)?;
            Ok((render::render(&report, cli.format)?, 0))
        }
        Command::Cyclo { d, n, n_max } => match (n, n_max) {
            (Some(n), None) => {
                if d.len() != 1 {
                    return Err(Error::invalid("--n takes exactly one scaling"));
                }
                let report = ops::cyclo_single(*n, d[0])?;
                Ok((render::render(&report, cli.format)?, 0))
            }
            (None, Some(n_max)) => {
                let report = ops::cyclo_grid(*n_max, d)?;
                Ok((render::render(&report, cli.format)?, 0))
            }
            _ => Err(Error::invalid("pass exactly one of --n or --n-max")),
        },
        Command::Selftest => {
            let report = ops::selftest(cfg);
            let code = if report.all_pass { 0 } else { 4 };
            Ok((render::render(&report, cli.format)?, code))
        }
    }
}

fn run(cli: Cli) -> u8 {
    let cfg = RunConfig {
        max_table_n: cli.max_table_n,
        max_field_n: cli.max_field_n,
        max_matrix_size: cli.max_matrix_size,
        seed: cli.seed,
    };
    let cache = match (&cli.cache_dir, cli.no_cache, cli.command.cacheable()) {
        (Some(dir), false, true) => Some(cache::Cache::new(dir.clone())),
        _ => None,
    };
    let op = cli.command.canonical();
    if let Some(c) = &cache {
        if let Some(stored) = c.lookup(&op, cli.format.name()) {
            print!("{stored}");
            return 0;
        }
    }
    match execute(&cli, &cfg) {
        Ok((output, code)) => {
            print!("{output}");
            if code == 0 {
                if let Some(c) = &cache {
                    if let Err(e) = c.store(&op, cli.format.name(), &output) {
                        eprintln!("warning: cache write failed: {e}");
                    }
                }
            }
            code
        }
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

fn main() -> ExitCode {
    ExitCode::from(run(Cli::parse()))
}
