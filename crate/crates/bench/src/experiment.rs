//! Experiment execution: every (algorithm, k, run) combination on one
//! dataset, with ratios against a reference value per `k`.

use std::fmt;
use std::time::Instant;

use substream::baselines::{lazy_greedy, random_greedy, SieveStreaming};
use substream::monotone::MonotoneStream;
use substream::nonmonotone::NonMonotoneStream;
use substream::rng::fnv1a;
use substream::{
    brute_force_opt, par, random_permutation, ElementId, Error, SetFunction, StreamConfig, StreamOrder,
    StreamingAlgorithm, ValueOracle,
};

use crate::datasets::DatasetSpec;
use crate::error::{BenchError, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Algorithm {
    Lazy,
    Monotone,
    NonMonotone,
    RandomGreedy,
    Sieve,
}

impl Algorithm {
    pub const ALL: [Algorithm; 5] =
        [Algorithm::Lazy, Algorithm::Monotone, Algorithm::NonMonotone, Algorithm::RandomGreedy, Algorithm::Sieve];

    pub fn name(self) -> &'static str {
        match self {
            Self::Lazy => "lazy",
            Self::Monotone => "monotone",
            Self::NonMonotone => "nonmonotone",
            Self::RandomGreedy => "random-greedy",
            Self::Sieve => "sieve",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|a| a.name() == s)
            .ok_or_else(|| BenchError::UnknownAlgorithm(s.to_string()))
    }

    /// Parses a comma-separated list.
    pub fn parse_list(s: &str) -> Result<Vec<Self>> {
        s.split(',').map(str::trim).filter(|x| !x.is_empty()).map(Self::parse).collect()
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Reference {
    Lazy,
    Brute,
}

impl Reference {
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "lazy" => Ok(Self::Lazy),
            "brute" => Ok(Self::Brute),
            other => Err(BenchError::Parse(format!("reference must be lazy or brute, got {other:?}"))),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Self::Lazy => "lazy",
            Self::Brute => "brute",
        }
    }
}

/// Parses `a..b` (inclusive) or a single `k`.
pub fn parse_k_range(s: &str) -> Result<(usize, usize)> {
    let bad = || BenchError::Parse(format!("expected k or a..b, got {s:?}"));
    let (lo, hi) = match s.split_once("..") {
        Some((a, b)) => (a.trim().parse().map_err(|_| bad())?, b.trim().parse().map_err(|_| bad())?),
        None => {
            let k = s.trim().parse().map_err(|_| bad())?;
            (k, k)
        }
    };
    if lo == 0 || lo > hi {
        return Err(BenchError::Parse(format!("k range {s:?} is empty or starts at 0")));
    }
    Ok((lo, hi))
}

#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentConfig {
    pub algorithms: Vec<Algorithm>,
    pub dataset: String,
    pub k_min: usize,
    pub k_max: usize,
    pub alpha: f64,
    pub eps: f64,
    pub band_const: f64,
    pub runs: usize,
    pub seed: u64,
    pub reference: Reference,
    pub memory_budget: Option<usize>,
    /// Record wall-clock time. Off by default so output is reproducible.
    pub timing: bool,
}

impl ExperimentConfig {
    pub fn new(algorithms: Vec<Algorithm>, dataset: impl Into<String>, k_min: usize, k_max: usize) -> Self {
        Self {
            algorithms,
            dataset: dataset.into(),
            k_min,
            k_max,
            alpha: 10.0,
            eps: substream::baselines::DEFAULT_SIEVE_EPS,
            band_const: substream::BandParams::DEFAULT_BAND_CONST,
            runs: 10,
            seed: 0,
            reference: Reference::Lazy,
            memory_budget: None,
            timing: false,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.algorithms.is_empty() {
            return Err(BenchError::Parse("no algorithms given".into()));
        }
        if self.k_min == 0 || self.k_min > self.k_max {
            return Err(BenchError::Parse(format!("empty k range {}..{}", self.k_min, self.k_max)));
        }
        if self.runs == 0 {
            return Err(BenchError::Parse("runs must be at least 1".into()));
        }
        Ok(())
    }

    /// Comment line written above the CSV header.
    pub fn metadata(&self) -> String {
        let algos: Vec<&str> = self.algorithms.iter().map(|a| a.name()).collect();
        format!(
            "# dataset={} reference={} algorithms={} k={}..{} alpha={} eps={} band_const={} runs={} seed={} memory_budget={}",
            self.dataset,
            self.reference.name(),
            algos.join(","),
            self.k_min,
            self.k_max,
            self.alpha,
            self.eps,
            self.band_const,
            self.runs,
            self.seed,
            self.memory_budget.map_or("none".to_string(), |m| m.to_string()),
        )
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunRecord {
    pub algorithm: String,
    pub dataset: String,
    pub k: usize,
    pub alpha: f64,
    pub eps: f64,
    pub seed: u64,
    pub value: f64,
    pub ratio: f64,
    pub queries: u64,
    pub peak_memory: usize,
    pub wall_ms: u64,
}

/// Stream order seed for a run; shared by all algorithms.
pub fn order_seed(base: u64, run: usize) -> u64 {
    base ^ run as u64
}

/// Seed for an algorithm's own randomness in a run.
pub fn algorithm_seed(base: u64, run: usize, alg: Algorithm) -> u64 {
    order_seed(base, run) ^ fnv1a(alg.name().as_bytes())
}

fn drive<A: StreamingAlgorithm>(alg: &mut A, order: &StreamOrder, budget: Option<usize>) -> Result<Vec<ElementId>> {
    for (step, &e) in order.elements().iter().enumerate() {
        alg.push(e)?;
        if let Some(b) = budget {
            let live = alg.live_elements();
            if live > b {
                return Err(Error::BudgetExceeded { step, live, budget: b }.into());
            }
        }
    }
    Ok(alg.finish()?)
}

fn reference_value(f: &dyn SetFunction, k: usize, reference: Reference) -> Result<f64> {
    let n = f.ground_size();
    Ok(match reference {
        Reference::Lazy => lazy_greedy(&ValueOracle::weak(f, k), n, k)?.value,
        Reference::Brute => brute_force_opt(&ValueOracle::strong(f), n, k)?.1,
    })
}

struct Measured {
    value: f64,
    peak_memory: usize,
}

fn execute(f: &dyn SetFunction, alg: Algorithm, k: usize, run: usize, cfg: &ExperimentConfig, oracle: &ValueOracle<'_>) -> Result<Measured> {
    let n = f.ground_size();
    let order = random_permutation(n, order_seed(cfg.seed, run))?;
    let seed = algorithm_seed(cfg.seed, run, alg);
    let stream_cfg = StreamConfig::new(k, cfg.alpha, seed).with_band_const(cfg.band_const);
    let offline_guard = |peak: usize| match cfg.memory_budget {
        Some(b) if peak > b => Err(BenchError::from(Error::BudgetExceeded { step: n - 1, live: peak, budget: b })),
        _ => Ok(()),
    };
    Ok(match alg {
        Algorithm::Lazy => {
            offline_guard(n)?;
            Measured { value: lazy_greedy(oracle, n, k)?.value, peak_memory: n }
        }
        Algorithm::RandomGreedy => {
            offline_guard(n)?;
            Measured { value: random_greedy(oracle, n, k, seed)?.value, peak_memory: n }
        }
        Algorithm::Monotone => {
            let mut run = MonotoneStream::new(oracle, n, stream_cfg)?;
            drive(&mut run, &order, cfg.memory_budget)?;
            let out = run.into_outcome()?;
            Measured { value: out.best_value, peak_memory: out.stats.peak_memory }
        }
        Algorithm::NonMonotone => {
            let mut run = NonMonotoneStream::new(oracle, n, stream_cfg)?;
            drive(&mut run, &order, cfg.memory_budget)?;
            let out = run.into_outcome()?;
            Measured { value: out.outcome.best_value, peak_memory: out.outcome.stats.peak_memory }
        }
        Algorithm::Sieve => {
            let mut s = SieveStreaming::new(oracle, k, cfg.eps)?;
            if let Some(b) = cfg.memory_budget {
                s = s.with_memory_budget(b);
            }
            drive(&mut s, &order, cfg.memory_budget)?;
            Measured { value: s.best().value, peak_memory: s.peak_memory() }
        }
    })
}

/// Runs every configured combination. Output is sorted by
/// (algorithm, k, seed) and is identical for identical configs regardless of
/// thread count.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<Vec<RunRecord>> {
    cfg.validate()?;
    let data = DatasetSpec::parse(&cfg.dataset)?.load()?;
    let f = data.function();
    let ks: Vec<usize> = (cfg.k_min..=cfg.k_max).collect();
    let references = par::map_slice(&ks, |&k| reference_value(f, k, cfg.reference))
        .into_iter()
        .collect::<Result<Vec<f64>>>()?;

    let mut jobs = Vec::new();
    for &alg in &cfg.algorithms {
        for (ki, &k) in ks.iter().enumerate() {
            for run in 0..cfg.runs {
                jobs.push((alg, k, references[ki], run));
            }
        }
    }
    let mut records = par::map_slice(&jobs, |&(alg, k, reference, run)| -> Result<RunRecord> {
        let oracle = ValueOracle::weak(f, k);
        let start = Instant::now();
        let m = execute(f, alg, k, run, cfg, &oracle)?;
        let wall_ms = if cfg.timing { start.elapsed().as_millis() as u64 } else { 0 };
        let ratio = if reference == 0.0 { 1.0 } else { m.value / reference };
        Ok(RunRecord {
            algorithm: alg.name().to_string(),
            dataset: cfg.dataset.clone(),
            k,
            alpha: cfg.alpha,
            eps: cfg.eps,
            seed: order_seed(cfg.seed, run),
            value: m.value,
            ratio,
            queries: oracle.query_count(),
            peak_memory: m.peak_memory,
            wall_ms,
        })
    })
    .into_iter()
    .collect::<Result<Vec<_>>>()?;
    records.sort_by(|a, b| (&a.algorithm, a.k, a.seed).cmp(&(&b.algorithm, b.k, b.seed)));
    Ok(records)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn k_ranges() {
        assert_eq!(parse_k_range("1..20").unwrap(), (1, 20));
        assert_eq!(parse_k_range("5").unwrap(), (5, 5));
        assert!(parse_k_range("3..2").is_err());
        assert!(parse_k_range("0..2").is_err());
        assert!(parse_k_range("x").is_err());
    }

    #[test]
    fn algorithm_names_round_trip() {
        for a in Algorithm::ALL {
            assert_eq!(Algorithm::parse(a.name()).unwrap(), a);
        }
        assert!(matches!(Algorithm::parse("salsa"), Err(BenchError::UnknownAlgorithm(_))));
    }

    #[test]
    fn record_count() {
        let mut cfg = ExperimentConfig::new(
            vec![Algorithm::Lazy, Algorithm::Monotone, Algorithm::Sieve],
            "synthetic:coverage:n=30,universe=40,seed=1",
            1,
            20,
        );
        cfg.alpha = 2.0;
        let records = run_experiment(&cfg).unwrap();
        assert_eq!(records.len(), 600);
        assert!(records.iter().filter(|r| r.algorithm == "lazy").all(|r| r.ratio == 1.0));
    }
}
