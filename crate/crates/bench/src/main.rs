use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use substream_bench::experiment::parse_k_range;
use substream_bench::output::{records_to_csv, summaries_to_csv, write_file};
use substream_bench::summary::summarize;
use substream_bench::{run_experiment, run_hardness, Algorithm, ExperimentConfig, HardnessConfig, Reference, Result};

#[derive(Parser)]
#[command(name = "bench", about = "Run streaming submodular maximization experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run algorithms over a dataset and a range of k.
    Run(RunArgs),
    /// Memory-bounded runs on the symmetric hardness instance.
    Hardness(HardnessArgs),
}

#[derive(Args)]
struct RunArgs {
    /// Comma-separated: monotone, nonmonotone, lazy, sieve, random-greedy.
    #[arg(long)]
    algo: String,
    /// FIMI path, kernel:<path> or synthetic:<kind>[:params].
    #[arg(long)]
    dataset: String,
    /// `k` or an inclusive range `a..b`.
    #[arg(long, default_value = "1..20")]
    k: String,
    #[arg(long, default_value_t = 10.0)]
    alpha: f64,
    #[arg(long, default_value_t = substream::baselines::DEFAULT_SIEVE_EPS)]
    eps: f64,
    #[arg(long, default_value_t = substream::BandParams::DEFAULT_BAND_CONST)]
    band_const: f64,
    #[arg(long, default_value_t = 10)]
    runs: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Reference value for ratios: lazy or brute.
    #[arg(long, default_value = "lazy")]
    reference: String,
    /// Fail a run whose live element count exceeds this.
    #[arg(long)]
    memory_budget: Option<usize>,
    /// Record wall-clock milliseconds (makes output non-reproducible).
    #[arg(long)]
    timing: bool,
    #[arg(long)]
    out: PathBuf,
    /// Also write per-(algorithm, k) means and variances here.
    #[arg(long)]
    summary: Option<PathBuf>,
}

#[derive(Args)]
struct HardnessArgs {
    #[arg(long)]
    n: usize,
    #[arg(long)]
    k: usize,
    /// Memory budget, default n / (4 k^1.5).
    #[arg(long)]
    m: Option<usize>,
    #[arg(long, default_value_t = 3)]
    r: usize,
    #[arg(long, default_value_t = 200)]
    runs: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = substream::baselines::DEFAULT_SIEVE_EPS)]
    eps: f64,
    #[arg(long)]
    out: PathBuf,
}

fn run(args: RunArgs) -> Result<()> {
    let (k_min, k_max) = parse_k_range(&args.k)?;
    let mut cfg = ExperimentConfig::new(Algorithm::parse_list(&args.algo)?, args.dataset, k_min, k_max);
    cfg.alpha = args.alpha;
    cfg.eps = args.eps;
    cfg.band_const = args.band_const;
    cfg.runs = args.runs;
    cfg.seed = args.seed;
    cfg.reference = Reference::parse(&args.reference)?;
    cfg.memory_budget = args.memory_budget;
    cfg.timing = args.timing;
    let records = run_experiment(&cfg)?;
    let meta = cfg.metadata();
    write_file(&args.out, &records_to_csv(Some(&meta), &records)?)?;
    log::info!("wrote {} records to {}", records.len(), args.out.display());
    if let Some(path) = args.summary {
        write_file(&path, &summaries_to_csv(Some(&meta), &summarize(&records))?)?;
    }
    Ok(())
}

fn hardness(args: HardnessArgs) -> Result<()> {
    let cfg = HardnessConfig { n: args.n, k: args.k, m: args.m, r: args.r, runs: args.runs, seed: args.seed, eps: args.eps };
    let report = run_hardness(&cfg)?;
    write_file(&args.out, &report.to_csv()?)?;
    println!(
        "budget={} bound={:.6} mean={:.6} stderr={:.6} audit_fraction={:.4} consistent={}",
        report.budget,
        report.bound,
        report.mean,
        report.stderr,
        report.audit_fraction,
        report.consistent()
    );
    Ok(())
}

fn init_threads() {
    let Ok(raw) = std::env::var("BENCH_THREADS") else { return };
    match raw.parse::<usize>() {
        Ok(n) if n > 0 => {
            if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
                log::warn!("could not size thread pool: {e}");
            }
        }
        _ => log::warn!("ignoring BENCH_THREADS={raw:?}"),
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    init_threads();
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Run(args) => run(args),
        Command::Hardness(args) => hardness(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
