//! Memory-bounded runs on the symmetric hardness instance.

use substream::baselines::SieveStreaming;
use substream::hardness::{indistinguishability_audit, prop_lb_bound, run_memory_bounded, HardnessInstance};
use substream::{par, random_permutation, ValueOracle};

use crate::error::{BenchError, Result};
use crate::output::fmt_g10;
use crate::summary::mean_var;

#[derive(Clone, Debug, PartialEq)]
pub struct HardnessConfig {
    pub n: usize,
    pub k: usize,
    /// Memory budget; defaults to `⌊n / (4 k^1.5)⌋`.
    pub m: Option<usize>,
    pub r: usize,
    pub runs: usize,
    pub seed: u64,
    pub eps: f64,
}

impl HardnessConfig {
    pub fn new(n: usize, k: usize) -> Self {
        Self { n, k, m: None, r: 3, runs: 200, seed: 0, eps: substream::baselines::DEFAULT_SIEVE_EPS }
    }

    pub fn budget(&self) -> usize {
        self.m.unwrap_or_else(|| (self.n as f64 / (4.0 * (self.k as f64).powf(1.5))).floor() as usize)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct HardnessRun {
    pub seed: u64,
    pub value: f64,
    pub peak_memory: usize,
    /// Every query held fewer than `r` good elements.
    pub audit: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct HardnessReport {
    pub config: HardnessConfig,
    pub budget: usize,
    pub bound: f64,
    pub runs: Vec<HardnessRun>,
    pub mean: f64,
    pub stderr: f64,
    pub audit_fraction: f64,
}

impl HardnessReport {
    /// The empirical mean lies within three standard errors of the bound or
    /// below it.
    pub fn consistent(&self) -> bool {
        self.mean <= self.bound + 3.0 * self.stderr
    }

    pub fn to_csv(&self) -> Result<String> {
        let c = &self.config;
        let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new());
        w.write_record(["seed", "value", "peak_memory", "audit"])?;
        for r in &self.runs {
            w.write_record([r.seed.to_string(), fmt_g10(r.value), r.peak_memory.to_string(), r.audit.to_string()])?;
        }
        let body = String::from_utf8(w.into_inner().map_err(|e| BenchError::Io(e.to_string()))?)
            .map_err(|e| BenchError::Io(e.to_string()))?;
        Ok(format!(
            "# n={} k={} m={} r={} runs={} seed={} eps={} bound={} mean={} stderr={} audit_fraction={}\n{body}",
            c.n,
            c.k,
            self.budget,
            c.r,
            c.runs,
            c.seed,
            c.eps,
            fmt_g10(self.bound),
            fmt_g10(self.mean),
            fmt_g10(self.stderr),
            fmt_g10(self.audit_fraction),
        ))
    }
}

/// Runs a memory-capped sieve over `runs` random orders of one instance.
pub fn run_hardness(cfg: &HardnessConfig) -> Result<HardnessReport> {
    if cfg.runs == 0 {
        return Err(BenchError::Parse("runs must be at least 1".into()));
    }
    let inst = HardnessInstance::new(cfg.n, cfg.k, cfg.seed)?;
    let budget = cfg.budget();
    if budget == 0 {
        return Err(BenchError::Parse(format!("memory budget is 0 for n={} k={}", cfg.n, cfg.k)));
    }
    let bound = prop_lb_bound(cfg.n, cfg.k, budget, cfg.r)?;
    let seeds: Vec<u64> = (0..cfg.runs as u64).map(|i| cfg.seed ^ i).collect();
    let runs = par::map_slice(&seeds, |&seed| -> Result<HardnessRun> {
        let order = random_permutation(cfg.n, seed)?;
        let oracle = ValueOracle::weak(&inst, cfg.k).recording();
        let run = {
            let mut alg = SieveStreaming::new(&oracle, cfg.k, cfg.eps)?.with_memory_budget(budget);
            run_memory_bounded(&mut alg, &inst, budget, &order)?
        };
        let audit = indistinguishability_audit(&oracle.take_transcript(), &inst, cfg.r);
        Ok(HardnessRun { seed, value: run.value, peak_memory: run.peak_memory, audit })
    })
    .into_iter()
    .collect::<Result<Vec<_>>>()?;
    let values: Vec<f64> = runs.iter().map(|r| r.value).collect();
    let (mean, var) = mean_var(&values);
    let stderr = (var / values.len() as f64).sqrt();
    let audit_fraction = runs.iter().filter(|r| r.audit).count() as f64 / runs.len() as f64;
    Ok(HardnessReport { config: cfg.clone(), budget, bound, runs, mean, stderr, audit_fraction })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_budget() {
        assert_eq!(HardnessConfig::new(2000, 9).budget(), 18);
    }

    #[test]
    fn small_report() {
        let mut cfg = HardnessConfig::new(200, 4);
        cfg.runs = 8;
        let rep = run_hardness(&cfg).unwrap();
        assert_eq!(rep.runs.len(), 8);
        assert!(rep.runs.iter().all(|r| r.peak_memory <= rep.budget));
        assert!(rep.to_csv().unwrap().lines().count() == 10);
    }
}
