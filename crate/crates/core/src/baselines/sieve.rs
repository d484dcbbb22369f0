use std::collections::{BTreeMap, HashMap};

use super::Selection;
use crate::error::{Error, Result};
use crate::oracle::{ElementId, ValueOracle};
use crate::order::StreamOrder;
use crate::stream::StreamingAlgorithm;

pub const DEFAULT_SIEVE_EPS: f64 = 0.1;

/// Most thresholds alive at once: `⌈log_{1+ε}(2k)⌉ + 1`.
pub fn sieve_set_bound(k: usize, eps: f64) -> usize {
    ((2.0 * k as f64).ln() / (1.0 + eps).ln()).ceil() as usize + 1
}

#[derive(Clone, Debug)]
struct Candidate {
    set: Vec<ElementId>,
    value: f64,
}

/// Threshold streaming. Tracks the largest singleton value `Δ` and keeps one
/// candidate set per threshold `v = (1+ε)^j` with `Δ <= v <= 2kΔ`. An element
/// joins `S_v` when `|S_v| < k` and `f(e | S_v) >= (v/2 - f(S_v))/(k - |S_v|)`.
///
/// With a memory budget, an element that is not already stored is only added
/// while fewer than `budget` distinct elements are held.
pub struct SieveStreaming<'o, 'f> {
    oracle: &'o ValueOracle<'f>,
    k: usize,
    eps: f64,
    budget: Option<usize>,
    delta: f64,
    sets: BTreeMap<i64, Candidate>,
    stored: HashMap<ElementId, usize>,
    max_sets: usize,
    peak_memory: usize,
}

impl<'o, 'f> SieveStreaming<'o, 'f> {
    pub fn new(oracle: &'o ValueOracle<'f>, k: usize, eps: f64) -> Result<Self> {
        if !(eps > 0.0 && eps < 1.0) {
            return Err(Error::InvalidInput(format!("eps must lie in (0, 1), got {eps}")));
        }
        if k == 0 {
            return Err(Error::InvalidInput("k must be at least 1".into()));
        }
        Ok(Self {
            oracle,
            k,
            eps,
            budget: None,
            delta: 0.0,
            sets: BTreeMap::new(),
            stored: HashMap::new(),
            max_sets: 0,
            peak_memory: 0,
        })
    }

    pub fn with_memory_budget(mut self, budget: usize) -> Self {
        self.budget = Some(budget);
        self
    }

    pub fn live_sets(&self) -> usize {
        self.sets.len()
    }

    /// Largest number of thresholds alive at any point.
    pub fn max_live_sets(&self) -> usize {
        self.max_sets
    }

    pub fn peak_memory(&self) -> usize {
        self.peak_memory
    }

    fn threshold(&self, j: i64) -> f64 {
        (1.0 + self.eps).powi(j as i32)
    }

    fn refresh(&mut self) {
        let base = (1.0 + self.eps).ln();
        let mut lo = (self.delta.ln() / base).ceil() as i64;
        while self.threshold(lo - 1) >= self.delta {
            lo -= 1;
        }
        while self.threshold(lo) < self.delta {
            lo += 1;
        }
        let top = 2.0 * self.k as f64 * self.delta;
        let mut hi = (top.ln() / base).floor() as i64;
        while self.threshold(hi + 1) <= top {
            hi += 1;
        }
        while self.threshold(hi) > top {
            hi -= 1;
        }
        let dropped: Vec<i64> = self.sets.range(..lo).map(|(&j, _)| j).collect();
        for j in dropped {
            let c = self.sets.remove(&j).unwrap();
            for e in c.set {
                let n = self.stored.get_mut(&e).unwrap();
                *n -= 1;
                if *n == 0 {
                    self.stored.remove(&e);
                }
            }
        }
        for j in lo..=hi {
            self.sets.entry(j).or_insert_with(|| Candidate { set: Vec::new(), value: 0.0 });
        }
        self.max_sets = self.max_sets.max(self.sets.len());
    }

    pub fn best(&self) -> Selection {
        let mut best = Selection { set: Vec::new(), value: 0.0 };
        for c in self.sets.values() {
            if c.value > best.value {
                best = Selection { set: c.set.clone(), value: c.value };
            }
        }
        best
    }
}

impl StreamingAlgorithm for SieveStreaming<'_, '_> {
    fn push(&mut self, e: ElementId) -> Result<()> {
        let single = self.oracle.eval(&[e])?;
        if single > self.delta {
            self.delta = single;
            self.refresh();
        }
        let k = self.k;
        for (&j, c) in self.sets.iter_mut() {
            if c.set.len() >= k {
                continue;
            }
            let known = self.stored.contains_key(&e);
            if !known && self.budget.is_some_and(|b| self.stored.len() >= b) {
                continue;
            }
            let v = (1.0 + self.eps).powi(j as i32);
            let with = self.oracle.eval_with(&c.set, e)?;
            let need = (v / 2.0 - c.value) / (k - c.set.len()) as f64;
            if with - c.value >= need {
                c.set.push(e);
                c.value = with;
                *self.stored.entry(e).or_insert(0) += 1;
            }
        }
        self.peak_memory = self.peak_memory.max(self.stored.len());
        Ok(())
    }

    fn live_elements(&self) -> usize {
        self.stored.len()
    }

    fn finish(&mut self) -> Result<Vec<ElementId>> {
        Ok(self.best().set)
    }
}

/// Runs sieve streaming over `order`.
pub fn sieve_streaming(oracle: &ValueOracle<'_>, order: &StreamOrder, k: usize, eps: f64) -> Result<Selection> {
    let mut s = SieveStreaming::new(oracle, k, eps)?;
    for &e in order.elements() {
        s.push(e)?;
    }
    Ok(s.best())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::ids;
    use crate::oracles::Additive;

    #[test]
    fn single_element() {
        let f = Additive::new(vec![3.0]);
        let o = ValueOracle::weak(&f, 1);
        let s = sieve_streaming(&o, &StreamOrder::identity(1), 1, 0.1).unwrap();
        assert_eq!(s.set, ids(&[0]));
        assert_eq!(s.value, 3.0);
    }

    #[test]
    fn ascending_weights_keep_the_maximum() {
        let f = Additive::new((1..=20).map(|w| w as f64).collect());
        let o = ValueOracle::weak(&f, 1);
        let s = sieve_streaming(&o, &StreamOrder::identity(20), 1, 0.2).unwrap();
        assert_eq!(s.set, ids(&[19]));
    }

    #[test]
    fn set_count_stays_bounded() {
        let f = Additive::new((0..200).map(|w| 1.0 + (w as f64 * 0.37).sin().abs() * w as f64).collect());
        let o = ValueOracle::strong(&f);
        for (k, eps) in [(1, 0.5), (5, 0.1), (10, 0.05)] {
            let mut s = SieveStreaming::new(&o, k, eps).unwrap();
            for i in 0..200u32 {
                s.push(ElementId(i)).unwrap();
                assert!(s.live_sets() <= sieve_set_bound(k, eps));
            }
        }
    }

    #[test]
    fn budget_caps_memory() {
        let f = Additive::new(vec![1.0; 50]);
        let o = ValueOracle::strong(&f);
        let mut s = SieveStreaming::new(&o, 10, 0.1).unwrap().with_memory_budget(4);
        for i in 0..50u32 {
            s.push(ElementId(i)).unwrap();
            assert!(s.live_elements() <= 4);
        }
        assert_eq!(s.peak_memory(), 4);
    }

    #[test]
    fn rejects_bad_eps() {
        let f = Additive::new(vec![1.0]);
        let o = ValueOracle::strong(&f);
        assert!(SieveStreaming::new(&o, 1, 0.0).is_err());
        assert!(SieveStreaming::new(&o, 1, 1.0).is_err());
    }
}
