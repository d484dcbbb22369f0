//! Exhaustive optimum for desk-scale instances.

use crate::error::{Error, Result};
use crate::oracle::{ElementId, ValueOracle};

/// Largest `C(n, k)` accepted by [`brute_force_opt`].
pub const BRUTE_FORCE_LIMIT: u128 = 10_000_000;

pub fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc
}

/// `OPT = max_{|S| <= k} f(S)` by enumeration of every subset of size at most
/// `k`.
///
/// Subsets are visited in lexicographic order of their sorted id sequences
/// and only a strictly larger value replaces the incumbent, so ties resolve to
/// the lexicographically smallest sequence (a proper prefix sorts first).
pub fn brute_force_opt(oracle: &ValueOracle<'_>, n: usize, k: usize) -> Result<(Vec<ElementId>, f64)> {
    let k = k.min(n);
    let count = binomial(n, k);
    if count > BRUTE_FORCE_LIMIT {
        return Err(Error::SizeGuard { n, k, count, limit: BRUTE_FORCE_LIMIT });
    }
    let mut best: Vec<ElementId> = Vec::new();
    let mut best_value = oracle.eval(&[])?;
    let mut current: Vec<ElementId> = Vec::with_capacity(k);
    visit(oracle, n, k, 0, &mut current, &mut best, &mut best_value)?;
    Ok((best, best_value))
}

// Depth-first in lexicographic order: a set is visited before its extensions.
fn visit(
    oracle: &ValueOracle<'_>,
    n: usize,
    k: usize,
    start: usize,
    current: &mut Vec<ElementId>,
    best: &mut Vec<ElementId>,
    best_value: &mut f64,
) -> Result<()> {
    if current.len() == k {
        return Ok(());
    }
    for next in start..n {
        current.push(ElementId::from(next));
        let v = oracle.eval(current)?;
        if v > *best_value || (v == *best_value && lex_less(current, best)) {
            *best_value = v;
            best.clone_from(current);
        }
        visit(oracle, n, k, next + 1, current, best, best_value)?;
        current.pop();
    }
    Ok(())
}

fn lex_less(a: &[ElementId], b: &[ElementId]) -> bool {
    // The empty set is the first sequence visited; anything tying with it
    // loses. Among nonempty sequences the DFS order is already lexicographic.
    !b.is_empty() && a < b
}
