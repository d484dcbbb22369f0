//! Random stream orders.

use rand::Rng;

use crate::error::{Error, Result};
use crate::oracle::ElementId;
use crate::rng::CounterRng;

/// Stream key for permutation draws.
pub const PERMUTATION_STREAM: u64 = 0x5045_524D; // "PERM"

/// A permutation of the ground set together with the seed it came from.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StreamOrder {
    permutation: Vec<ElementId>,
    seed: u64,
}

impl StreamOrder {
    /// Wraps an explicit order after checking it is a bijection on `0..n`.
    pub fn from_permutation(permutation: Vec<ElementId>, seed: u64) -> Result<Self> {
        let n = permutation.len();
        let mut seen = vec![false; n];
        for &e in &permutation {
            if e.index() >= n || seen[e.index()] {
                return Err(Error::InvalidInput(format!("not a permutation of 0..{n}: {e}")));
            }
            seen[e.index()] = true;
        }
        Ok(Self { permutation, seed })
    }

    pub fn identity(n: usize) -> Self {
        Self { permutation: (0..n).map(ElementId::from).collect(), seed: 0 }
    }

    pub fn elements(&self) -> &[ElementId] {
        &self.permutation
    }

    pub fn len(&self) -> usize {
        self.permutation.len()
    }

    pub fn is_empty(&self) -> bool {
        self.permutation.is_empty()
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }
}

/// Uniform permutation of `0..n` by Fisher–Yates on the permutation
/// substream of `seed`.
pub fn random_permutation(n: usize, seed: u64) -> Result<StreamOrder> {
    if n == 0 {
        return Err(Error::InvalidInput("stream must contain at least one element".into()));
    }
    let mut cursor = CounterRng::new(seed, PERMUTATION_STREAM).cursor(0);
    let mut perm: Vec<ElementId> = (0..n).map(ElementId::from).collect();
    for i in (1..n).rev() {
        let j = cursor.random_range(0..=i);
        perm.swap(i, j);
    }
    Ok(StreamOrder { permutation: perm, seed })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_element() {
        assert_eq!(random_permutation(1, 3).unwrap().elements(), &[ElementId(0)]);
    }

    #[test]
    fn reproducible() {
        assert_eq!(random_permutation(3, 99).unwrap(), random_permutation(3, 99).unwrap());
    }

    #[test]
    fn rejects_empty() {
        assert!(random_permutation(0, 1).is_err());
    }

    #[test]
    fn bijection_check() {
        assert!(StreamOrder::from_permutation(vec![ElementId(1), ElementId(0)], 0).is_ok());
        assert!(StreamOrder::from_permutation(vec![ElementId(1), ElementId(1)], 0).is_err());
        assert!(StreamOrder::from_permutation(vec![ElementId(2), ElementId(0)], 0).is_err());
    }

    #[test]
    fn all_120_permutations_equally_likely() {
        // Independent check: index every permutation of 5 by its Lehmer code
        // and compare counts to 1/120 within 5 sigma.
        let seeds = 100_000u64;
        let mut counts = vec![0u32; 120];
        for s in 0..seeds {
            let p = random_permutation(5, s).unwrap();
            counts[lehmer_rank(p.elements())] += 1;
        }
        let pr = 1.0 / 120.0;
        let mean = seeds as f64 * pr;
        let sigma = (seeds as f64 * pr * (1.0 - pr)).sqrt();
        for (i, &c) in counts.iter().enumerate() {
            assert!((c as f64 - mean).abs() <= 5.0 * sigma, "perm {i}: {c} vs {mean}");
        }
    }

    fn lehmer_rank(p: &[ElementId]) -> usize {
        let n = p.len();
        let mut rank = 0;
        for i in 0..n {
            let smaller = p[i + 1..].iter().filter(|e| e.0 < p[i].0).count();
            rank = rank * (n - i) + smaller;
        }
        rank
    }
}
