use std::fmt::Write as _;

use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::oracle::{ElementId, SetFunction};
use crate::rng::CounterRng;

use super::check_range;

/// Diagonal ridge added to synthetic kernels.
pub const KERNEL_RIDGE: f64 = 1e-3;

const KERNEL_STREAM: u64 = 0x4B45_524E; // "KERN"

/// Log-determinant diversity objective `f(S) = log det(L_S)` over a symmetric
/// positive-definite kernel. Not monotone and possibly negative.
#[derive(Clone, Debug, PartialEq)]
pub struct KernelInstance {
    n: usize,
    matrix: Vec<f64>,
}

impl KernelInstance {
    /// Validates exact symmetry and positive-definiteness (full Cholesky).
    pub fn new(n: usize, matrix: Vec<f64>) -> Result<Self> {
        if matrix.len() != n * n {
            return Err(Error::InvalidInput(format!("expected {} entries, got {}", n * n, matrix.len())));
        }
        for i in 0..n {
            for j in 0..i {
                if matrix[i * n + j] != matrix[j * n + i] {
                    return Err(Error::InvalidInput(format!("kernel not symmetric at ({i}, {j})")));
                }
            }
        }
        let inst = Self { n, matrix };
        let all: Vec<ElementId> = (0..n).map(ElementId::from).collect();
        inst.log_det(&all)?;
        Ok(inst)
    }

    pub fn dimension(&self) -> usize {
        self.n
    }

    pub fn entry(&self, i: usize, j: usize) -> f64 {
        self.matrix[i * self.n + j]
    }

    /// `log det(L_S)` via Cholesky of the principal submatrix.
    pub fn log_det(&self, set: &[ElementId]) -> Result<f64> {
        check_range(set, self.n)?;
        let s = set.len();
        let mut chol = vec![0.0f64; s * s];
        let mut log_det = 0.0;
        for i in 0..s {
            for j in 0..=i {
                let mut sum = self.entry(set[i].index(), set[j].index());
                for p in 0..j {
                    sum -= chol[i * s + p] * chol[j * s + p];
                }
                if i == j {
                    if sum.is_nan() || sum <= 0.0 {
                        return Err(Error::NotPositiveDefinite { subset: set.to_vec() });
                    }
                    let d = sum.sqrt();
                    chol[i * s + i] = d;
                    log_det += 2.0 * d.ln();
                } else {
                    chol[i * s + j] = sum / chol[j * s + j];
                }
            }
        }
        Ok(log_det)
    }
}

impl SetFunction for KernelInstance {
    fn ground_size(&self) -> usize {
        self.n
    }

    fn evaluate(&self, set: &[ElementId]) -> Result<f64> {
        self.log_det(set)
    }

    fn is_monotone(&self) -> bool {
        false
    }

    fn name(&self) -> &str {
        "logdet"
    }
}

/// `L = B·Bᵀ + δI` with `B` an `n × rank` matrix of standard normal draws.
pub fn build_random_kernel(n: usize, rank: usize, seed: u64) -> Result<KernelInstance> {
    if rank == 0 || rank > n {
        return Err(Error::InvalidInput(format!("rank {rank} must be in 1..={n}")));
    }
    let mut cursor = CounterRng::new(seed, KERNEL_STREAM).cursor(0);
    let b: Vec<f64> = (0..n * rank).map(|_| cursor.sample(StandardNormal)).collect();
    let mut matrix = vec![0.0; n * n];
    for i in 0..n {
        for j in 0..=i {
            let mut dot: f64 = (0..rank).map(|p| b[i * rank + p] * b[j * rank + p]).sum();
            if i == j {
                dot += KERNEL_RIDGE;
            }
            matrix[i * n + j] = dot;
            matrix[j * n + i] = dot;
        }
    }
    KernelInstance::new(n, matrix)
}

/// Kernel file: first line `n`, then `n` lines of `n` decimal floats.
pub fn parse_kernel(text: &str) -> Result<KernelInstance> {
    let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
    let (_, first) = lines.next().ok_or(Error::Parse { line: 1, message: "empty kernel file".into() })?;
    let n: usize = first
        .trim()
        .parse()
        .map_err(|_| Error::Parse { line: 1, message: format!("bad dimension {first:?}") })?;
    let mut matrix = Vec::with_capacity(n * n);
    let mut rows = 0;
    for (idx, line) in lines {
        let before = matrix.len();
        for tok in line.split_whitespace() {
            let v: f64 = tok
                .parse()
                .map_err(|_| Error::Parse { line: idx + 1, message: format!("bad float {tok:?}") })?;
            matrix.push(v);
        }
        if matrix.len() - before != n {
            return Err(Error::Parse { line: idx + 1, message: format!("expected {n} entries") });
        }
        rows += 1;
    }
    if rows != n {
        return Err(Error::Parse { line: rows + 2, message: format!("expected {n} rows, got {rows}") });
    }
    KernelInstance::new(n, matrix)
}

pub fn serialize_kernel(k: &KernelInstance) -> String {
    let mut out = format!("{}\n", k.n);
    for i in 0..k.n {
        for j in 0..k.n {
            if j > 0 {
                out.push(' ');
            }
            write!(out, "{}", k.entry(i, j)).unwrap();
        }
        out.push('\n');
    }
    out
}
