use rand::Rng;

use super::Selection;
use crate::error::Result;
use crate::oracle::{ElementId, ValueOracle};
use crate::rng::CounterRng;

const RANDOM_GREEDY_STREAM: u64 = 0x5247_5259; // "RGRY"

/// Randomized greedy for possibly non-monotone objectives. Each of `k` rounds
/// ranks the remaining elements by marginal, keeps those among the top `k`
/// with positive marginal, pads with no-op slots up to `k`, and picks one
/// slot uniformly. Picking a no-op skips the round.
pub fn random_greedy(oracle: &ValueOracle<'_>, n: usize, k: usize, seed: u64) -> Result<Selection> {
    let mut rng = CounterRng::new(seed, RANDOM_GREEDY_STREAM).cursor(0);
    let mut set: Vec<ElementId> = Vec::with_capacity(k);
    let mut value = 0.0;
    let mut in_set = vec![false; n];
    for _ in 0..k {
        let mut gains = Vec::with_capacity(n);
        for i in (0..n).filter(|&i| !in_set[i]) {
            let e = ElementId::from(i);
            let with = oracle.eval_with(&set, e)?;
            gains.push((with - value, with, e));
        }
        gains.sort_by(|a, b| b.0.total_cmp(&a.0).then(a.2.cmp(&b.2)));
        gains.truncate(k);
        gains.retain(|g| g.0 > 0.0);
        let slot = rng.random_range(0..k);
        if let Some(&(_, with, e)) = gains.get(slot) {
            set.push(e);
            in_set[e.index()] = true;
            value = with;
        }
    }
    Ok(Selection { set, value })
}
