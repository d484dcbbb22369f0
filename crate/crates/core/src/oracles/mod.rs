//! Concrete submodular value oracles and dataset ingestion.

mod coverage;
mod cut;
mod fimi;
mod logdet;

pub use coverage::CoverageInstance;
pub use cut::CutInstance;
pub use fimi::{parse_fimi, read_fimi, serialize_fimi};
pub use logdet::{build_random_kernel, parse_kernel, serialize_kernel, KernelInstance, KERNEL_RIDGE};

use crate::error::{Error, Result};
use crate::oracle::{ElementId, SetFunction};

/// Modular function `f(S) = Σ_{e∈S} w_e`. Monotone when all weights are
/// nonnegative.
#[derive(Clone, Debug)]
pub struct Additive {
    weights: Vec<f64>,
}

impl Additive {
    pub fn new(weights: Vec<f64>) -> Self {
        Self { weights }
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }
}

impl SetFunction for Additive {
    fn ground_size(&self) -> usize {
        self.weights.len()
    }

    fn evaluate(&self, set: &[ElementId]) -> Result<f64> {
        set.iter()
            .map(|e| {
                self.weights
                    .get(e.index())
                    .copied()
                    .ok_or(Error::ElementOutOfRange { id: e.0, n: self.weights.len() })
            })
            .sum()
    }

    fn is_monotone(&self) -> bool {
        self.weights.iter().all(|&w| w >= 0.0)
    }

    fn name(&self) -> &str {
        "additive"
    }
}

pub(crate) fn check_range(set: &[ElementId], n: usize) -> Result<()> {
    match set.iter().find(|e| e.index() >= n) {
        Some(e) => Err(Error::ElementOutOfRange { id: e.0, n }),
        None => Ok(()),
    }
}
