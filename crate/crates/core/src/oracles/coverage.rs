use crate::error::{Error, Result};
use crate::oracle::{ElementId, SetFunction};

use super::check_range;

/// Max-coverage over an explicit set system. The ground set is the list of
/// sets; `f(S) = |∪_{i∈S} sets[i]|`.
///
/// Each set is stored both as a sorted item list and as a fixed-width bitset
/// over the universe, so a query is a word-wise OR and a popcount.
#[derive(Clone, Debug)]
pub struct CoverageInstance {
    sets: Vec<Vec<u32>>,
    universe_size: usize,
    words: usize,
    bits: Vec<u64>,
}

impl CoverageInstance {
    /// Builds an instance; each set is sorted and deduplicated.
    pub fn new(mut sets: Vec<Vec<u32>>, universe_size: usize) -> Result<Self> {
        for (i, s) in sets.iter_mut().enumerate() {
            s.sort_unstable();
            s.dedup();
            if let Some(&last) = s.last() {
                if last as usize >= universe_size {
                    return Err(Error::InvalidInput(format!(
                        "set {i} references item {last} outside universe of size {universe_size}"
                    )));
                }
            }
        }
        let words = universe_size.div_ceil(64);
        let mut bits = vec![0u64; words * sets.len()];
        for (i, s) in sets.iter().enumerate() {
            let row = &mut bits[i * words..(i + 1) * words];
            for &item in s {
                row[item as usize / 64] |= 1u64 << (item % 64);
            }
        }
        Ok(Self { sets, universe_size, words, bits })
    }

    pub fn sets(&self) -> &[Vec<u32>] {
        &self.sets
    }

    pub fn universe_size(&self) -> usize {
        self.universe_size
    }

    pub fn len(&self) -> usize {
        self.sets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sets.is_empty()
    }

    fn row(&self, i: usize) -> &[u64] {
        &self.bits[i * self.words..(i + 1) * self.words]
    }

    /// Exact size of the union of the selected sets.
    pub fn coverage(&self, set: &[ElementId]) -> Result<usize> {
        check_range(set, self.sets.len())?;
        match set {
            [] => Ok(0),
            [only] => Ok(self.sets[only.index()].len()),
            _ => {
                let mut acc = vec![0u64; self.words];
                for e in set {
                    for (a, w) in acc.iter_mut().zip(self.row(e.index())) {
                        *a |= *w;
                    }
                }
                Ok(acc.iter().map(|w| w.count_ones() as usize).sum())
            }
        }
    }
}

impl SetFunction for CoverageInstance {
    fn ground_size(&self) -> usize {
        self.sets.len()
    }

    fn evaluate(&self, set: &[ElementId]) -> Result<f64> {
        self.coverage(set).map(|c| c as f64)
    }

    fn is_monotone(&self) -> bool {
        true
    }

    fn name(&self) -> &str {
        "coverage"
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::ids;
    use std::collections::BTreeSet;

    #[test]
    fn empty_union() {
        let c = CoverageInstance::new(vec![vec![0, 1], vec![1, 2]], 3).unwrap();
        assert_eq!(c.evaluate(&[]).unwrap(), 0.0);
    }

    #[test]
    fn two_overlapping_sets() {
        let c = CoverageInstance::new(vec![vec![0, 1], vec![1, 2]], 3).unwrap();
        assert_eq!(c.evaluate(&ids(&[0, 1])).unwrap(), 3.0);
    }

    #[test]
    fn full_union_counts_distinct_items() {
        let sets = vec![vec![3, 70, 1], vec![70, 129], vec![5, 5, 3], vec![]];
        let c = CoverageInstance::new(sets.clone(), 130).unwrap();
        let distinct: BTreeSet<u32> = sets.iter().flatten().copied().collect();
        assert_eq!(c.evaluate(&ids(&[0, 1, 2, 3])).unwrap(), distinct.len() as f64);
    }

    #[test]
    fn normalizes_sets() {
        let c = CoverageInstance::new(vec![vec![2, 0, 2]], 3).unwrap();
        assert_eq!(c.sets()[0], vec![0, 2]);
    }

    #[test]
    fn rejects_bad_inputs() {
        assert!(CoverageInstance::new(vec![vec![3]], 3).is_err());
        let c = CoverageInstance::new(vec![vec![0]], 1).unwrap();
        assert!(matches!(c.evaluate(&ids(&[1])), Err(Error::ElementOutOfRange { .. })));
    }
}
