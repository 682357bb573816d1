// SPDX-License-Identifier: Apache-2.0

//! `rev4`: build lookup tables, synthesize optimal circuits, run experiments.
//!
//! Results go to standard output and diagnostics to standard error.
//!
//! Exit codes: 0 success, 1 other failure, 2 bad arguments or input,
//! 3 the function needs more than `L` gates, 4 I/O or table failure.

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use clap::{Args, Parser, Subcommand, ValueEnum};
use rev4::bfs::{build_with_progress, expanded_counts};
use rev4::circuit::Circuit;
use rev4::experiments::{
    self, format_benchmarks, hard_search, linear_distribution, random_distribution, run_benchmarks, Budget,
    BENCHMARKS,
};
use rev4::perm::{Perm, PermError};
use rev4::store::{CanonicalTable, StoreError, DEFAULT_LOAD_TARGET};
use rev4::synth::{ExpandMode, SearchConfig, SynthError, Synthesizer};
use thiserror::Error;

#[derive(Parser)]
#[command(name = "rev4", version, about = "Optimal 4-bit reversible circuit synthesis")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build the table of all functions of size up to K and save it.
    Build {
        #[arg(long)]
        k: u8,
        #[arg(long)]
        out: PathBuf,
        /// Target load factor of the hash table.
        #[arg(long, default_value_t = DEFAULT_LOAD_TARGET)]
        load: f64,
    },
    /// Synthesize an optimal circuit for a permutation or an existing circuit.
    Synth {
        #[command(flatten)]
        search: SearchArgs,
        /// Sixteen images, as `0,1,...,15` or `[0,1,...,15]`.
        #[arg(long, conflicts_with = "circuit", required_unless_present = "circuit")]
        perm: Option<String>,
        /// A circuit such as `TOF(a,b,c) CNOT(a,b) NOT(a)`; its function is resynthesized.
        #[arg(long)]
        circuit: Option<String>,
    },
    /// Print per-size counts and hash table statistics of a table.
    Stats {
        #[command(flatten)]
        table: TableArgs,
    },
    /// Size distribution of random permutations.
    Random {
        #[command(flatten)]
        search: SearchArgs,
        #[arg(long, default_value_t = 10_000)]
        samples: usize,
        #[arg(long, default_value_t = experiments::DEFAULT_SEED)]
        seed: u64,
        #[arg(long, default_value_t = 1)]
        threads: usize,
    },
    /// Size distribution of all linear functions.
    Linear {
        #[command(flatten)]
        search: SearchArgs,
        #[arg(long, default_value_t = 1)]
        threads: usize,
    },
    /// Synthesize the benchmark functions.
    Bench {
        #[command(flatten)]
        search: SearchArgs,
    },
    /// Look for functions larger than any found so far.
    Hard {
        #[command(flatten)]
        search: SearchArgs,
        /// Time budget in seconds.
        #[arg(long, default_value_t = 60.0)]
        seconds: f64,
        /// Evaluation budget; unlimited when absent.
        #[arg(long)]
        evaluations: Option<u64>,
        /// Start from the identity only instead of the benchmark functions.
        #[arg(long)]
        from_identity: bool,
    },
}

#[derive(Args)]
struct TableArgs {
    /// Table file written by `build`.
    #[arg(long, env = "REV4_TABLE")]
    table: PathBuf,
}

#[derive(Args)]
struct SearchArgs {
    #[command(flatten)]
    table: TableArgs,
    /// Largest size scanned in the second phase; defaults to min(k, 6).
    #[arg(long)]
    m: Option<u8>,
    #[arg(long, value_enum, default_value_t = Mode::OnTheFly)]
    expand_mode: Mode,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    OnTheFly,
    Materialized,
}

#[derive(Debug, Error)]
enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("invalid permutation: {0}")]
    Perm(#[from] PermError),
    #[error("size is greater than L = {0}")]
    Exceeds(u8),
    #[error("{path}: {source}")]
    Store { path: String, source: StoreError },
    #[error("{0}")]
    Synth(SynthError),
    #[error("{0}")]
    Other(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) | CliError::Perm(_) => 2,
            CliError::Exceeds(_) => 3,
            CliError::Store { .. } => 4,
            CliError::Synth(_) | CliError::Other(_) => 1,
        }
    }
}

impl From<SynthError> for CliError {
    fn from(e: SynthError) -> CliError {
        match e {
            SynthError::SizeExceedsL { l } => CliError::Exceeds(l),
            SynthError::ScanTooDeep { .. } => CliError::Usage(e.to_string()),
            e => CliError::Synth(e),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("rev4: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

fn load_table(args: &TableArgs) -> Result<CanonicalTable, CliError> {
    let start = Instant::now();
    let table = CanonicalTable::load(&args.table).map_err(|e| store_error(&args.table, e))?;
    eprintln!("loaded k = {} table from {} in {:.2?}", table.k(), args.table.display(), start.elapsed());
    Ok(table)
}

fn store_error(path: &std::path::Path, source: StoreError) -> CliError {
    CliError::Store { path: path.display().to_string(), source }
}

fn config(args: &SearchArgs, table: &CanonicalTable) -> SearchConfig {
    let cfg = SearchConfig::new(table.k()).with_expand_mode(match args.expand_mode {
        Mode::OnTheFly => ExpandMode::OnTheFly,
        Mode::Materialized => ExpandMode::Materialized,
    });
    match args.m {
        Some(m) => cfg.with_m(m),
        None => cfg,
    }
}

fn header(cfg: &SearchConfig) {
    println!("# k = {} m = {} L = {}", cfg.k, cfg.m, cfg.l());
}

fn run(command: Command) -> Result<(), CliError> {
    match command {
        Command::Build { k, out, load } => {
            if !(0.05..=0.9).contains(&load) {
                return Err(CliError::Usage(format!("load factor {load} is outside 0.05..=0.9")));
            }
            let start = Instant::now();
            let table = build_with_progress(k, load, |level, count| {
                eprintln!("level {level}: {count} representatives ({:.2?})", start.elapsed());
            })
            .map_err(|e| CliError::Other(e.to_string()))?;
            table.save(&out).map_err(|e| store_error(&out, e))?;
            eprintln!("saved {} entries to {}", table.len(), out.display());
            print_stats(&table);
        }
        Command::Synth { search, perm, circuit } => {
            let f = match (perm, circuit) {
                (Some(p), _) => p.parse::<Perm>()?,
                (None, Some(c)) => {
                    let c: Circuit = c.parse().map_err(|e| CliError::Usage(format!("invalid circuit: {e}")))?;
                    println!("input {} gates", c.len());
                    c.eval()
                }
                (None, None) => unreachable!("clap requires one of the inputs"),
            };
            let table = load_table(&search.table)?;
            let cfg = config(&search, &table);
            let synth = Synthesizer::new(&table, cfg)?;
            header(&cfg);
            println!("perm {f}");
            let c = synth.synthesize(f)?;
            if c.eval() != f {
                return Err(CliError::Other(format!("internal error: {c} does not compute {f}")));
            }
            println!("size {}", c.len());
            println!("circuit {c}");
        }
        Command::Stats { table } => print_stats(&load_table(&table)?),
        Command::Random { search, samples, seed, threads } => {
            let table = load_table(&search.table)?;
            let cfg = config(&search, &table);
            let synth = Synthesizer::new(&table, cfg)?;
            header(&cfg);
            println!("# samples = {samples} seed = {seed} prng = {}", experiments::PRNG_NAME);
            let start = Instant::now();
            let h = random_distribution(samples, seed, &synth, threads.max(1));
            eprintln!("{h}");
            eprintln!("mean size (excluding > L) {:.4}, > L fraction {:.4}, {:.2?}", h.mean_size(), h.exceeded_fraction(), start.elapsed());
            print!("{}", h.to_tsv(cfg.l()));
        }
        Command::Linear { search, threads } => {
            let table = load_table(&search.table)?;
            let cfg = config(&search, &table);
            let synth = Synthesizer::new(&table, cfg)?;
            header(&cfg);
            let start = Instant::now();
            let h = linear_distribution(&synth, threads.max(1));
            eprintln!("{h}");
            eprintln!("{:.2?}", start.elapsed());
            print!("{}", h.to_tsv(cfg.l()));
        }
        Command::Bench { search } => {
            let table = load_table(&search.table)?;
            let cfg = config(&search, &table);
            let synth = Synthesizer::new(&table, cfg)?;
            header(&cfg);
            print!("{}", format_benchmarks(&run_benchmarks(&BENCHMARKS, &synth), cfg.l()));
        }
        Command::Hard { search, seconds, evaluations, from_identity } => {
            let table = load_table(&search.table)?;
            let cfg = config(&search, &table);
            let synth = Synthesizer::new(&table, cfg)?;
            header(&cfg);
            let seeds: Vec<Perm> = if from_identity {
                vec![Perm::IDENTITY]
            } else {
                BENCHMARKS.iter().map(|c| c.perm()).collect()
            };
            let budget = Budget { time: Some(Duration::from_secs_f64(seconds.max(0.0))), evaluations };
            let r = hard_search(&seeds, &synth, budget);
            println!("best size {}", r.best_size);
            println!("classes {}", r.best.len());
            println!("functions {}", r.best_functions);
            println!("evaluations {}", r.evaluations);
            println!("exhausted {}", r.exhausted);
            for rep in r.best.iter().take(10) {
                println!("{rep}");
            }
        }
    }
    Ok(())
}

fn print_stats(table: &CanonicalTable) {
    let expanded = expanded_counts(table);
    println!("size\treduced\tfunctions");
    for (i, (r, f)) in table.level_counts().iter().zip(&expanded).enumerate() {
        println!("{i}\t{r}\t{f}");
    }
    eprintln!("{}", table.stats());
}
