//! Dataset specifications and loading.
//!
//! A dataset argument is one of:
//!
//! - a path to a FIMI transaction file (coverage: each line is a set),
//! - `kernel:<path>` for a PSD kernel file (log-determinant objective),
//! - `synthetic:chess`, `synthetic:mushroom`: deterministic transaction sets
//!   with the shape of the FIMI chess and mushroom files,
//! - `synthetic:coverage:n=..,universe=..,density=..,seed=..`,
//! - `synthetic:cut:n=..,p=..,seed=..` (non-monotone graph cut),
//! - `synthetic:kernel:n=..,rank=..,seed=..`.

use std::collections::BTreeMap;
use std::path::PathBuf;

use substream::oracles::{build_random_kernel, parse_kernel, read_fimi, CoverageInstance, CutInstance, KernelInstance};
use substream::rng::CounterRng;
use substream::SetFunction;

use crate::error::{BenchError, Result};

const SYNTH_STREAM: u64 = 0x5359_4E54; // "SYNT"

/// Per-attribute domain sizes of the chess file (36 board features and the
/// class), 75 items in total.
const CHESS_DOMAINS: [usize; 37] = [
    2, 2, 2, 2, 2, 2, 2, 2, 2, 2, 2, 2, 2, 2, 3, 2, 2, 2, 2, 2, 2, 2, 2, 2, 2, 2, 2, 2, 2, 2, 2, 2, 2, 2, 2, 2, 2,
];
const CHESS_ROWS: usize = 3196;

/// Per-attribute domain sizes of the mushroom file (22 attributes and the
/// class), 119 items in total.
const MUSHROOM_DOMAINS: [usize; 23] = [2, 6, 4, 10, 2, 9, 2, 2, 2, 12, 2, 5, 4, 4, 9, 9, 1, 4, 3, 5, 9, 6, 7];
const MUSHROOM_ROWS: usize = 8124;

#[derive(Clone, Debug, PartialEq)]
pub enum DatasetSpec {
    Fimi(PathBuf),
    Kernel(PathBuf),
    Chess,
    Mushroom,
    Coverage { n: usize, universe: usize, density: f64, seed: u64 },
    Cut { n: usize, p: f64, seed: u64 },
    RandomKernel { n: usize, rank: usize, seed: u64 },
}

fn params(spec: &str) -> Result<BTreeMap<&str, &str>> {
    let mut out = BTreeMap::new();
    for kv in spec.split(',').filter(|s| !s.is_empty()) {
        let (k, v) = kv
            .split_once('=')
            .ok_or_else(|| BenchError::Parse(format!("expected key=value, found {kv:?}")))?;
        out.insert(k.trim(), v.trim());
    }
    Ok(out)
}

fn get<T: std::str::FromStr>(p: &BTreeMap<&str, &str>, key: &str, default: Option<T>) -> Result<T> {
    match p.get(key) {
        Some(v) => v.parse().map_err(|_| BenchError::Parse(format!("bad value for {key}: {v:?}"))),
        None => default.ok_or_else(|| BenchError::Parse(format!("missing parameter {key}"))),
    }
}

impl DatasetSpec {
    pub fn parse(s: &str) -> Result<Self> {
        if let Some(path) = s.strip_prefix("kernel:") {
            return Ok(Self::Kernel(path.into()));
        }
        let Some(rest) = s.strip_prefix("synthetic:") else {
            return Ok(Self::Fimi(s.into()));
        };
        let (kind, args) = rest.split_once(':').unwrap_or((rest, ""));
        let p = params(args)?;
        match kind {
            "chess" => Ok(Self::Chess),
            "mushroom" => Ok(Self::Mushroom),
            "coverage" => Ok(Self::Coverage {
                n: get(&p, "n", None)?,
                universe: get(&p, "universe", None)?,
                density: get(&p, "density", Some(0.2))?,
                seed: get(&p, "seed", Some(0))?,
            }),
            "cut" => Ok(Self::Cut { n: get(&p, "n", None)?, p: get(&p, "p", Some(0.4))?, seed: get(&p, "seed", Some(0))? }),
            "kernel" => Ok(Self::RandomKernel {
                n: get(&p, "n", None)?,
                rank: get(&p, "rank", None)?,
                seed: get(&p, "seed", Some(0))?,
            }),
            other => Err(BenchError::Parse(format!("unknown synthetic dataset {other:?}"))),
        }
    }

    pub fn load(&self) -> Result<Dataset> {
        Ok(match self {
            Self::Fimi(path) => {
                if !path.exists() {
                    return Err(BenchError::Io(format!("{}: no such file", path.display())));
                }
                Dataset::Coverage(read_fimi(path)?)
            }
            Self::Kernel(path) => {
                let text = std::fs::read_to_string(path).map_err(|e| BenchError::Io(format!("{}: {e}", path.display())))?;
                Dataset::Kernel(parse_kernel(&text)?)
            }
            Self::Chess => Dataset::Coverage(categorical(&CHESS_DOMAINS, CHESS_ROWS, 1)),
            Self::Mushroom => Dataset::Coverage(categorical(&MUSHROOM_DOMAINS, MUSHROOM_ROWS, 2)),
            Self::Coverage { n, universe, density, seed } => Dataset::Coverage(random_coverage(*n, *universe, *density, *seed)?),
            Self::Cut { n, p, seed } => Dataset::Cut(random_cut(*n, *p, *seed)?),
            Self::RandomKernel { n, rank, seed } => Dataset::Kernel(build_random_kernel(*n, *rank, *seed)?),
        })
    }
}

pub enum Dataset {
    Coverage(CoverageInstance),
    Cut(CutInstance),
    Kernel(KernelInstance),
}

impl Dataset {
    pub fn function(&self) -> &dyn SetFunction {
        match self {
            Self::Coverage(c) => c,
            Self::Cut(c) => c,
            Self::Kernel(k) => k,
        }
    }

    pub fn len(&self) -> usize {
        self.function().ground_size()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// Transactions over categorical attributes: each row takes one value per
/// attribute, item ids are `offset(attribute) + value`. Value frequencies are
/// skewed geometrically with a per-attribute ratio, and two latent classes
/// shift them so that rows are correlated as in the real files.
pub fn categorical(domains: &[usize], rows: usize, seed: u64) -> CoverageInstance {
    let rng = CounterRng::new(seed, SYNTH_STREAM);
    let mut offsets = Vec::with_capacity(domains.len());
    let mut total = 0;
    for &d in domains {
        offsets.push(total);
        total += d;
    }
    // Cumulative value distributions for each (class, attribute).
    let mut cdfs = vec![Vec::new(); 2 * domains.len()];
    for class in 0..2 {
        for (a, &d) in domains.iter().enumerate() {
            let key = (class * domains.len() + a) as u64;
            let ratio = 0.25 + 0.6 * rng.f64_at(key * 2);
            let shift = (rng.u64_at(key * 2 + 1) % d as u64) as usize;
            let weights: Vec<f64> = (0..d).map(|v| ratio.powi(((v + d - shift) % d) as i32)).collect();
            let sum: f64 = weights.iter().sum();
            let mut acc = 0.0;
            cdfs[class * domains.len() + a] = weights
                .iter()
                .map(|w| {
                    acc += w / sum;
                    acc
                })
                .collect();
        }
    }
    let row_rng = rng.substream(1);
    let sets = (0..rows)
        .map(|r| {
            let base = (r * (domains.len() + 1)) as u64;
            let class = (row_rng.f64_at(base) < 0.48) as usize;
            domains
                .iter()
                .enumerate()
                .map(|(a, &d)| {
                    let u = row_rng.f64_at(base + 1 + a as u64);
                    let cdf = &cdfs[class * domains.len() + a];
                    let v = cdf.iter().position(|&c| u < c).unwrap_or(d - 1);
                    (offsets[a] + v) as u32
                })
                .collect()
        })
        .collect();
    CoverageInstance::new(sets, total).expect("categorical items lie in the universe")
}

pub fn random_coverage(n: usize, universe: usize, density: f64, seed: u64) -> Result<CoverageInstance> {
    let rng = CounterRng::new(seed, SYNTH_STREAM).substream(2);
    let sets = (0..n as u64)
        .map(|s| (0..universe as u32).filter(|&u| rng.f64_at(s * universe as u64 + u as u64) < density).collect())
        .collect();
    Ok(CoverageInstance::new(sets, universe)?)
}

pub fn random_cut(n: usize, p: f64, seed: u64) -> Result<CutInstance> {
    let rng = CounterRng::new(seed, SYNTH_STREAM).substream(3);
    let mut edges = Vec::new();
    let mut c = 0;
    for u in 0..n as u32 {
        for v in u + 1..n as u32 {
            if rng.f64_at(c) < p {
                edges.push((u, v, 1.0 + (rng.f64_at(c + 1) * 4.0).floor()));
            }
            c += 2;
        }
    }
    Ok(CutInstance::new(n, edges)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn domain_totals() {
        assert_eq!(CHESS_DOMAINS.iter().sum::<usize>(), 75);
        assert_eq!(MUSHROOM_DOMAINS.iter().sum::<usize>(), 119);
    }

    #[test]
    fn chess_shape() {
        let c = categorical(&CHESS_DOMAINS, CHESS_ROWS, 1);
        assert_eq!(c.len(), 3196);
        assert_eq!(c.universe_size(), 75);
        assert!(c.sets().iter().all(|s| s.len() == 37));
    }

    #[test]
    fn parse_specs() {
        assert_eq!(DatasetSpec::parse("synthetic:chess").unwrap(), DatasetSpec::Chess);
        assert_eq!(
            DatasetSpec::parse("synthetic:cut:n=8,p=0.5,seed=3").unwrap(),
            DatasetSpec::Cut { n: 8, p: 0.5, seed: 3 }
        );
        assert_eq!(DatasetSpec::parse("data/x.dat").unwrap(), DatasetSpec::Fimi("data/x.dat".into()));
        assert!(DatasetSpec::parse("synthetic:cut:p=0.5").is_err());
        assert!(DatasetSpec::parse("synthetic:nope").is_err());
    }

    #[test]
    fn deterministic() {
        let a = categorical(&MUSHROOM_DOMAINS, 100, 2);
        let b = categorical(&MUSHROOM_DOMAINS, 100, 2);
        assert_eq!(a.sets(), b.sets());
    }
}
