use std::cmp::Ordering;
use std::collections::BinaryHeap;

use super::Selection;
use crate::error::Result;
use crate::oracle::{ElementId, ValueOracle};
use crate::stream::StreamingAlgorithm;

/// Cached upper bound on an element's marginal, valid as of `round`.
#[derive(Clone, Copy, Debug)]
struct Entry {
    bound: f64,
    /// `f(S ∪ {e})` for the `S` of `round`.
    with: f64,
    element: ElementId,
    round: usize,
}

impl PartialEq for Entry {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Entry {}

impl PartialOrd for Entry {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Entry {
    // Max-heap order: larger bound first, then smaller id.
    fn cmp(&self, other: &Self) -> Ordering {
        self.bound
            .total_cmp(&other.bound)
            .then_with(|| other.element.cmp(&self.element))
    }
}

/// Greedy over the ground set `0..n`.
pub fn lazy_greedy(oracle: &ValueOracle<'_>, n: usize, k: usize) -> Result<Selection> {
    let all: Vec<ElementId> = (0..n).map(ElementId::from).collect();
    lazy_greedy_over(oracle, &all, k)
}

/// Greedy restricted to `candidates`: repeatedly adds the element of largest
/// marginal (ties to the smaller id) until `k` are chosen or no marginal is
/// positive. Stale marginals are kept in a max-heap and re-evaluated only when
/// they reach the top, which yields exactly the naive greedy output for
/// submodular objectives.
pub fn lazy_greedy_over(oracle: &ValueOracle<'_>, candidates: &[ElementId], k: usize) -> Result<Selection> {
    let mut set = Vec::with_capacity(k.min(candidates.len()));
    let mut value = 0.0;
    let mut heap = BinaryHeap::with_capacity(candidates.len());
    if k == 0 {
        return Ok(Selection { set, value });
    }
    for &e in candidates {
        let with = oracle.eval_with(&set, e)?;
        heap.push(Entry { bound: with, with, element: e, round: 0 });
    }
    while set.len() < k {
        let Some(top) = heap.pop() else { break };
        if top.round == set.len() {
            if top.bound <= 0.0 {
                break;
            }
            set.push(top.element);
            value = top.with;
            continue;
        }
        let with = oracle.eval_with(&set, top.element)?;
        heap.push(Entry { bound: with - value, with, element: top.element, round: set.len() });
    }
    Ok(Selection { set, value })
}

/// Offline algorithm adapted to the streaming interface: buffers every
/// element and runs lazy greedy at the end.
pub struct StoreAll<'o, 'f> {
    oracle: &'o ValueOracle<'f>,
    k: usize,
    buffer: Vec<ElementId>,
    selection: Option<Selection>,
}

impl<'o, 'f> StoreAll<'o, 'f> {
    pub fn new(oracle: &'o ValueOracle<'f>, k: usize) -> Self {
        Self { oracle, k, buffer: Vec::new(), selection: None }
    }

    pub fn selection(&self) -> Option<&Selection> {
        self.selection.as_ref()
    }
}

impl StreamingAlgorithm for StoreAll<'_, '_> {
    fn push(&mut self, e: ElementId) -> Result<()> {
        self.buffer.push(e);
        Ok(())
    }

    fn live_elements(&self) -> usize {
        self.buffer.len()
    }

    fn finish(&mut self) -> Result<Vec<ElementId>> {
        let mut sorted = self.buffer.clone();
        sorted.sort_unstable();
        let s = lazy_greedy_over(self.oracle, &sorted, self.k)?;
        let set = s.set.clone();
        self.selection = Some(s);
        Ok(set)
    }
}
