#![allow(dead_code)]

use substream::oracles::{CoverageInstance, CutInstance};
use substream::rng::CounterRng;
use substream::{ElementId, ValueOracle};

pub fn random_coverage(seed: u64, n: usize, universe: usize, density: f64) -> CoverageInstance {
    let rng = CounterRng::new(seed, 1);
    let sets = (0..n as u64)
        .map(|s| {
            (0..universe as u32)
                .filter(|&u| rng.f64_at(s * universe as u64 + u as u64) < density)
                .collect()
        })
        .collect();
    CoverageInstance::new(sets, universe).unwrap()
}

pub fn random_cut(seed: u64, n: usize, p: f64) -> CutInstance {
    let rng = CounterRng::new(seed, 2);
    let mut edges = Vec::new();
    let mut c = 0;
    for u in 0..n as u32 {
        for v in u + 1..n as u32 {
            c += 2;
            if rng.f64_at(c) < p {
                edges.push((u, v, 1.0 + (rng.f64_at(c + 1) * 4.0).floor()));
            }
        }
    }
    CutInstance::new(n, edges).unwrap()
}

/// Plain greedy: every round evaluates every remaining element.
pub fn naive_greedy(o: &ValueOracle<'_>, n: usize, k: usize) -> (Vec<ElementId>, f64) {
    let mut set: Vec<ElementId> = Vec::new();
    let mut value = 0.0;
    while set.len() < k {
        let mut best: Option<(ElementId, f64, f64)> = None;
        for i in 0..n {
            let e = ElementId::from(i);
            if set.contains(&e) {
                continue;
            }
            let with = o.eval_with(&set, e).unwrap();
            let gain = with - value;
            if best.is_none_or(|(be, bg, _)| gain > bg || (gain == bg && e < be)) {
                best = Some((e, gain, with));
            }
        }
        match best {
            Some((e, gain, with)) if gain > 0.0 => {
                set.push(e);
                value = with;
            }
            _ => break,
        }
    }
    (set, value)
}
