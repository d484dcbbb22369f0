//! Symmetric coverage instance over the hypercube `[k]^n`, the memory
//! lower-bound calculator, and a harness that runs streaming algorithms under
//! a buffer budget.
//!
//! The instance has `k` good sets and `n - k` bad sets. A bad set is
//! `{x : x_i = 1}` for its own coordinate `i > k`; good set `j` is
//! `{x : x_1 = j, x_2 != k} ∪ {x : x_1 = k, x_2 = k}`. A union of `g` good and
//! `b` bad sets covers the fraction
//!
//! ```text
//! f̂(g, b) = 1 - (1 - P_g)(1 - 1/k)^b,   P_0 = 0,   P_g = (g(k-1) + 1)/k²
//! ```
//!
//! of the cube: the good sets constrain only the first two coordinates and
//! each bad set an independent later one. For `g <= 2` this equals
//! `1 - (1 - 1/k)^{g+b}`, so such queries cannot tell good from bad.

mod bound;
mod harness;

pub use bound::{hypergeometric_tail, prop_lb_bound};
pub use harness::{indistinguishability_audit, run_memory_bounded, BoundedRun};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::Rng;

use crate::error::{Error, Result};
use crate::oracle::{ElementId, SetFunction};
use crate::rng::CounterRng;

const GOOD_STREAM: u64 = 0x474F_4F44; // "GOOD"

/// `f̂(g, b)` in floating point.
pub fn f_hat(k: usize, g: usize, b: usize) -> f64 {
    let kf = k as f64;
    let p = if g == 0 { 0.0 } else { (g as f64 * (kf - 1.0) + 1.0) / (kf * kf) };
    1.0 - (1.0 - p) * (1.0 - 1.0 / kf).powi(b as i32)
}

/// `f̂(g, b)` in exact rational arithmetic.
pub fn f_hat_exact(k: usize, g: usize, b: usize) -> BigRational {
    let kb = BigInt::from(k);
    let p = if g == 0 {
        BigRational::zero()
    } else {
        BigRational::new(BigInt::from(g) * (&kb - 1) + 1, &kb * &kb)
    };
    let q = BigRational::one() - BigRational::new(BigInt::one(), kb);
    BigRational::one() - (BigRational::one() - p) * num_traits::pow(q, b)
}

#[derive(Clone, Debug)]
pub struct HardnessInstance {
    n: usize,
    k: usize,
    good: Vec<bool>,
}

impl HardnessInstance {
    /// Hides the `k` good ids at a uniformly random `k`-subset of `0..n`.
    pub fn new(n: usize, k: usize, seed: u64) -> Result<Self> {
        if k < 2 || k > n {
            return Err(Error::InvalidInput(format!("need 2 <= k <= n, got k = {k}, n = {n}")));
        }
        let mut rng = CounterRng::new(seed, GOOD_STREAM).cursor(0);
        let mut ids: Vec<usize> = (0..n).collect();
        for i in 0..k {
            let j = rng.random_range(i..n);
            ids.swap(i, j);
        }
        let mut good = vec![false; n];
        for &i in &ids[..k] {
            good[i] = true;
        }
        Ok(Self { n, k, good })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// `(g, b)` for `set`.
    pub fn counts(&self, set: &[ElementId]) -> Result<(usize, usize)> {
        let mut g = 0;
        for e in set {
            if e.index() >= self.n {
                return Err(Error::ElementOutOfRange { id: e.0, n: self.n });
            }
            g += self.good[e.index()] as usize;
        }
        Ok((g, set.len() - g))
    }

    pub fn value(&self, set: &[ElementId]) -> Result<f64> {
        let (g, b) = self.counts(set)?;
        Ok(f_hat(self.k, g, b))
    }

    pub(crate) fn good_count(&self, set: &[ElementId]) -> usize {
        set.iter().filter(|e| self.good.get(e.index()).copied().unwrap_or(false)).count()
    }

    /// Value of the optimum, the union of all good sets.
    pub fn optimum(&self) -> f64 {
        f_hat(self.k, self.k, 0)
    }
}

impl SetFunction for HardnessInstance {
    fn ground_size(&self) -> usize {
        self.n
    }

    fn evaluate(&self, set: &[ElementId]) -> Result<f64> {
        self.value(set)
    }

    fn is_monotone(&self) -> bool {
        true
    }

    fn name(&self) -> &str {
        "hardness"
    }
}
