//! Multi-level partial solutions shared by both streaming algorithms.
//!
//! A [`LevelFamily`] holds `L_0..L_k`, where `L_ℓ` targets cardinality `ℓ`,
//! together with cached values `f(L_ℓ)`. In window `i` only the levels in the
//! update band `[z_l, z_h']` are extended, where the band tracks the expected
//! number of optimal elements seen so far (`i/α`) and `z_h' = min(z_h, k-1)`
//! keeps every extended level at size at most `k`.

use std::collections::HashSet;
use std::fmt;
use std::ops::RangeInclusive;

use crate::error::{Error, Result};
use crate::oracle::{ElementId, ValueOracle};

/// Band parameters. The half-width is `round(band_const · α · √(k ln k))`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BandParams {
    pub alpha: f64,
    pub band_const: f64,
    pub k: usize,
}

impl BandParams {
    pub const DEFAULT_BAND_CONST: f64 = 20.0;

    pub fn new(k: usize, alpha: f64) -> Self {
        Self { alpha, band_const: Self::DEFAULT_BAND_CONST, k }
    }

    pub fn with_band_const(mut self, band_const: f64) -> Self {
        self.band_const = band_const;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !self.alpha.is_finite() || self.alpha < 1.0 {
            return Err(Error::InvalidInput(format!("alpha must be >= 1, got {}", self.alpha)));
        }
        if !self.band_const.is_finite() || self.band_const < 0.0 {
            return Err(Error::InvalidInput(format!("band constant must be >= 0, got {}", self.band_const)));
        }
        if self.k == 0 {
            return Err(Error::InvalidInput("k must be at least 1".into()));
        }
        Ok(())
    }

    pub fn half_width(&self) -> usize {
        if self.k <= 1 {
            return 0;
        }
        let k = self.k as f64;
        (self.band_const * self.alpha * (k * k.ln()).sqrt()).round() as usize
    }

    /// Raw band `(z_l, z_h)` for window `i`, with `0 <= z_l` and `z_h <= k`.
    pub fn band_indices(&self, i: usize) -> (usize, usize) {
        let w = self.half_width();
        let ratio = i as f64 / self.alpha;
        let low = (ratio.floor() as usize).saturating_sub(w);
        let high = (ratio.ceil() as usize).saturating_add(w).min(self.k);
        (low.min(self.k), high)
    }

    /// Levels `ℓ` extended in window `i` (`L_{ℓ+1} ← L_ℓ ∪ {e}`): the band
    /// with both ends clamped to `ℓ <= k-1`. Once `⌊i/α⌋ - w` reaches `k` the
    /// range is `[k-1, k-1]`, so the top level stays updatable. `None` when
    /// empty, which the clamp rules out for valid parameters.
    pub fn update_range(&self, i: usize) -> Option<RangeInclusive<usize>> {
        let (low, high) = self.band_indices(i);
        let top = self.k.checked_sub(1)?;
        let (low, high) = (low.min(top), high.min(top));
        (low <= high).then_some(low..=high)
    }

    /// Levels whose successor may change by insertion in window `i`:
    /// `[min(z_l, k-1), z_h]`.
    pub fn touched_band(&self, i: usize) -> (usize, usize) {
        let (low, high) = self.band_indices(i);
        (low.min(self.k.saturating_sub(1)), high)
    }
}

/// `band_indices` as a free function.
pub fn band_indices(params: &BandParams, i: usize) -> (usize, usize) {
    params.band_indices(i)
}

#[derive(Clone, Debug, PartialEq)]
pub struct LevelFamily {
    sets: Vec<Vec<ElementId>>,
    values: Vec<f64>,
}

impl LevelFamily {
    /// `k + 1` empty levels.
    pub fn empty(k: usize) -> Self {
        Self { sets: vec![Vec::new(); k + 1], values: vec![0.0; k + 1] }
    }

    pub fn k(&self) -> usize {
        self.sets.len() - 1
    }

    pub fn set(&self, level: usize) -> &[ElementId] {
        &self.sets[level]
    }

    pub fn value(&self, level: usize) -> f64 {
        self.values[level]
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn sets(&self) -> &[Vec<ElementId>] {
        &self.sets
    }

    /// `argmax_{1<=ℓ<=k} f(L_ℓ)`, ties toward the lower level.
    pub fn best_level(&self) -> usize {
        let mut best = 1.min(self.k());
        for l in 2..=self.k() {
            if self.values[l] > self.values[best] {
                best = l;
            }
        }
        best
    }

    /// Every element stored in any level.
    pub fn stored_elements(&self) -> HashSet<ElementId> {
        self.sets.iter().flatten().copied().collect()
    }

    /// Scores `e` against the levels in `range` (levels `L^{i-1}`).
    ///
    /// Returns `f(L_ℓ ∪ {e})` for each `ℓ` in the range and the band score
    /// `Σ f(e | L_ℓ)`. One query per level that does not already contain `e`.
    pub fn score(&self, oracle: &ValueOracle<'_>, e: ElementId, range: &RangeInclusive<usize>) -> Result<BandScore> {
        let mut with = Vec::with_capacity(range.clone().count());
        let mut score = 0.0;
        for l in range.clone() {
            let v = if self.sets[l].contains(&e) {
                self.values[l]
            } else {
                oracle.eval_with(&self.sets[l], e)?
            };
            score += v - self.values[l];
            with.push(v);
        }
        Ok(BandScore { score, with_values: with })
    }

    /// The improvement gate: `Σ_ℓ f(L_ℓ ∪ {e}) > Σ_ℓ f(L_{ℓ+1})` over the
    /// update range, strict.
    pub fn gate(&self, range: &RangeInclusive<usize>, with_values: &[f64]) -> bool {
        let extended: f64 = with_values.iter().sum();
        let current: f64 = range.clone().map(|l| self.values[l + 1]).sum();
        extended > current
    }

    /// `L_{ℓ+1} ← L_ℓ ∪ {e}` for every `ℓ` in `range`, using the pre-update
    /// `L_ℓ`. `with_values` are the matching `f(L_ℓ ∪ {e})`.
    pub fn insert(&mut self, e: ElementId, range: &RangeInclusive<usize>, with_values: &[f64]) {
        debug_assert_eq!(range.clone().count(), with_values.len());
        for (offset, &v) in with_values.iter().enumerate().rev() {
            let l = range.start() + offset;
            let mut next = self.sets[l].clone();
            if !next.contains(&e) {
                next.push(e);
            }
            self.sets[l + 1] = next;
            self.values[l + 1] = v;
        }
    }

    /// Smoothing for monotone objectives: for `ℓ = 1..k-1` in order, when
    /// `f(L_ℓ) >= f(L_{ℓ+1})` replace `L_{ℓ+1}` by `L_ℓ` plus the element of
    /// `L_{ℓ+1} ∖ L_ℓ` with the largest marginal on `L_ℓ` (ties toward the
    /// smaller id), or by a copy of `L_ℓ` when the difference is empty.
    pub fn smooth_greedy(&mut self, oracle: &ValueOracle<'_>) -> Result<()> {
        for l in 1..self.k() {
            if self.values[l] < self.values[l + 1] {
                continue;
            }
            let mut best: Option<(ElementId, f64)> = None;
            for &e in &self.sets[l + 1] {
                if self.sets[l].contains(&e) {
                    continue;
                }
                let v = oracle.eval_with(&self.sets[l], e)?;
                let better = match best {
                    None => true,
                    Some((be, bv)) => v > bv || (v == bv && e < be),
                };
                if better {
                    best = Some((e, v));
                }
            }
            let mut next = self.sets[l].clone();
            let value = match best {
                Some((e, v)) => {
                    next.push(e);
                    v
                }
                None => self.values[l],
            };
            self.sets[l + 1] = next;
            self.values[l + 1] = value;
        }
        Ok(())
    }

    /// Smoothing for non-monotone objectives: for `ℓ = 1..k-1` in order, when
    /// `f(L_ℓ) >= f(L_{ℓ+1})` copy `L_ℓ` into `L_{ℓ+1}`. No queries.
    pub fn smooth_copy(&mut self) {
        for l in 1..self.k() {
            if self.values[l] >= self.values[l + 1] {
                self.sets[l + 1] = self.sets[l].clone();
                self.values[l + 1] = self.values[l];
            }
        }
    }

    pub fn smooth(&mut self, rule: SmoothingRule, oracle: &ValueOracle<'_>) -> Result<()> {
        match rule {
            SmoothingRule::Greedy => self.smooth_greedy(oracle),
            SmoothingRule::Copy => {
                self.smooth_copy();
                Ok(())
            }
        }
    }

    /// Re-evaluates every level and compares with the cache.
    pub fn verify_cache(&self, oracle: &ValueOracle<'_>) -> Result<bool> {
        for (s, &v) in self.sets.iter().zip(&self.values) {
            if oracle.eval(s)? != v {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

impl fmt::Display for LevelFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (l, (s, v)) in self.sets.iter().zip(&self.values).enumerate().skip(1) {
            if l > 1 {
                write!(f, " ")?;
            }
            let items: Vec<String> = s.iter().map(|e| e.to_string()).collect();
            write!(f, "L{l}={{{}}}:{v}", items.join(","))?;
        }
        Ok(())
    }
}

/// Levels `ℓ` in `0..k` with `f(prev_ℓ) > f(next_{ℓ+1})`, where `next` is the
/// family one window after `prev`. Levels inside `skip` (an inclusive band)
/// are not checked.
pub fn nesting_violations(prev: &LevelFamily, next: &LevelFamily, skip: Option<(usize, usize)>) -> Vec<usize> {
    (0..prev.k())
        .filter(|&l| !skip.is_some_and(|(lo, hi)| (lo..=hi).contains(&l)))
        .filter(|&l| prev.value(l) > next.value(l + 1))
        .collect()
}

/// Band score of one candidate.
#[derive(Clone, Debug, PartialEq)]
pub struct BandScore {
    pub score: f64,
    pub with_values: Vec<f64>,
}

/// `(score, id)` order used by every window argmax: larger score wins, ties
/// go to the smaller id.
pub fn beats(score: f64, id: ElementId, best_score: f64, best_id: ElementId) -> bool {
    score > best_score || (score == best_score && id < best_id)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SmoothingRule {
    Greedy,
    Copy,
}

/// One level update: `element` was inserted in `window` over levels
/// `band.0..=band.1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct HistoryEntry {
    pub element: ElementId,
    pub window: usize,
    pub band: (usize, usize),
}

/// Ordered log of level updates plus the distinct-element view `H`.
///
/// An element re-selected through resampling produces a second update entry
/// but is stored once in `H`.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct History {
    entries: Vec<HistoryEntry>,
    members: Vec<ElementId>,
    index: HashSet<ElementId>,
}

impl History {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, entry: HistoryEntry) -> Result<()> {
        if let Some(last) = self.entries.last() {
            if entry.window <= last.window {
                return Err(Error::MalformedHistory(format!(
                    "window {} recorded after window {}",
                    entry.window, last.window
                )));
            }
        }
        if self.index.insert(entry.element) {
            self.members.push(entry.element);
        }
        self.entries.push(entry);
        Ok(())
    }

    pub fn entries(&self) -> &[HistoryEntry] {
        &self.entries
    }

    /// Distinct elements of `H` in first-insertion order.
    pub fn elements(&self) -> &[ElementId] {
        &self.members
    }

    pub fn contains(&self, e: ElementId) -> bool {
        self.index.contains(&e)
    }

    /// `|H|`.
    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// Entry recorded for `window`, if any.
    pub fn entry_for(&self, window: usize) -> Option<&HistoryEntry> {
        self.entries
            .binary_search_by_key(&window, |e| e.window)
            .ok()
            .map(|i| &self.entries[i])
    }
}

/// Rebuilds the final level family by replaying every recorded update and
/// the smoothing sweep that followed it.
pub fn reconstruct_levels(
    history: &History,
    oracle: &ValueOracle<'_>,
    k: usize,
    rule: SmoothingRule,
) -> Result<LevelFamily> {
    let mut levels = LevelFamily::empty(k);
    let mut last = 0;
    for entry in history.entries() {
        if entry.window <= last {
            return Err(Error::MalformedHistory(format!("window {} is not increasing", entry.window)));
        }
        if entry.band.1 >= k || entry.band.0 > entry.band.1 {
            return Err(Error::MalformedHistory(format!("band {:?} invalid for k = {k}", entry.band)));
        }
        last = entry.window;
        let range = entry.band.0..=entry.band.1;
        let scored = levels.score(oracle, entry.element, &range)?;
        levels.insert(entry.element, &range, &scored.with_values);
        levels.smooth(rule, oracle)?;
    }
    Ok(levels)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::ids;
    use crate::oracles::CoverageInstance;

    #[test]
    fn saturated_band() {
        let p = BandParams::new(5, 2.0);
        for i in 1..=10 {
            assert_eq!(p.band_indices(i), (0, 5));
            assert_eq!(p.update_range(i), Some(0..=4));
        }
    }

    #[test]
    fn zero_width_band_tracks_ratio() {
        let p = BandParams::new(100, 1.0).with_band_const(0.0);
        assert_eq!(p.band_indices(50), (50, 50));
        let q = BandParams::new(100, 2.0).with_band_const(0.0);
        assert_eq!(q.band_indices(41), (20, 21));
    }

    #[test]
    fn narrow_band_arithmetic() {
        // w = round(0.1 · 2 · √(100 ln 100)) = round(4.29...) = 4
        let w = (0.2f64 * (100.0 * 100f64.ln()).sqrt()).round() as usize;
        assert_eq!(w, 4);
        let p = BandParams::new(100, 2.0).with_band_const(0.1);
        assert_eq!(p.half_width(), w);
        assert_eq!(p.band_indices(40), (20 - w, 20 + w));
    }

    #[test]
    fn k_one_has_zero_width() {
        let p = BandParams::new(1, 3.0);
        assert_eq!(p.half_width(), 0);
        assert_eq!(p.band_indices(1), (0, 1));
        assert_eq!(p.update_range(1), Some(0..=0));
        assert_eq!(p.band_indices(3), (1, 1));
        assert_eq!(p.update_range(3), Some(0..=0));
        assert_eq!(p.touched_band(3), (0, 1));
    }

    #[test]
    fn validation() {
        assert!(BandParams::new(3, 0.5).validate().is_err());
        assert!(BandParams::new(0, 2.0).validate().is_err());
        assert!(BandParams::new(3, 2.0).with_band_const(-1.0).validate().is_err());
        assert!(BandParams::new(3, 2.0).validate().is_ok());
    }

    fn three_sets() -> CoverageInstance {
        // a = {0,1,2}, b = {0,3}, c = {1}
        CoverageInstance::new(vec![vec![0, 1, 2], vec![0, 3], vec![1]], 4).unwrap()
    }

    fn family(sets: &[&[u32]], oracle: &ValueOracle<'_>) -> LevelFamily {
        let mut f = LevelFamily::empty(sets.len());
        for (l, s) in sets.iter().enumerate() {
            f.sets[l + 1] = ids(s);
            f.values[l + 1] = oracle.eval(&ids(s)).unwrap();
        }
        f
    }

    #[test]
    fn greedy_smoothing_unchanged_when_increasing() {
        let cov = three_sets();
        let o = ValueOracle::strong(&cov);
        let mut f = family(&[&[0], &[0, 1]], &o);
        let before = f.clone();
        let q = o.query_count();
        f.smooth_greedy(&o).unwrap();
        assert_eq!(f, before);
        assert_eq!(o.query_count(), q);
    }

    #[test]
    fn greedy_smoothing_hand_trace() {
        // f(a) = 3 >= f({b, c}) = 3, so L2 becomes a + argmax over {b, c} of
        // the marginal on a: f(b|a) = 1 (item 3), f(c|a) = 0. Result {a, b}.
        let cov = three_sets();
        let o = ValueOracle::strong(&cov);
        let mut f = family(&[&[0], &[1, 2]], &o);
        f.smooth_greedy(&o).unwrap();
        assert_eq!(f.set(2), &ids(&[0, 1])[..]);
        assert_eq!(f.value(2), 4.0);
        assert!(f.verify_cache(&o).unwrap());
    }

    #[test]
    fn greedy_smoothing_empty_difference_copies() {
        let cov = three_sets();
        let o = ValueOracle::strong(&cov);
        let mut f = family(&[&[0, 2], &[0]], &o);
        f.smooth_greedy(&o).unwrap();
        assert_eq!(f.set(2), &ids(&[0, 2])[..]);
        assert_eq!(f.value(2), 3.0);
    }

    #[test]
    fn copy_smoothing() {
        let cov = three_sets();
        let o = ValueOracle::strong(&cov);
        let mut f = family(&[&[0], &[2], &[1, 2]], &o);
        f.smooth_copy();
        assert_eq!(f.set(2), &ids(&[0])[..]);
        assert_eq!(f.set(3), &ids(&[0])[..]);
        assert_eq!(f.values(), &[0.0, 3.0, 3.0, 3.0]);
    }

    #[test]
    fn insert_uses_pre_update_levels() {
        let cov = three_sets();
        let o = ValueOracle::strong(&cov);
        let mut f = family(&[&[0], &[2]], &o);
        let range = 0..=1;
        let s = f.score(&o, ElementId(1), &range).unwrap();
        assert_eq!(s.with_values, vec![2.0, 4.0]);
        assert_eq!(s.score, 3.0);
        assert!(f.gate(&range, &s.with_values));
        f.insert(ElementId(1), &range, &s.with_values);
        assert_eq!(f.set(1), &ids(&[1])[..]);
        assert_eq!(f.set(2), &ids(&[0, 1])[..]);
        assert!(f.verify_cache(&o).unwrap());
    }

    #[test]
    fn history_rules() {
        let mut h = History::new();
        h.push(HistoryEntry { element: ElementId(3), window: 2, band: (0, 1) }).unwrap();
        h.push(HistoryEntry { element: ElementId(3), window: 4, band: (0, 1) }).unwrap();
        assert_eq!(h.len(), 1);
        assert_eq!(h.entries().len(), 2);
        assert!(h.push(HistoryEntry { element: ElementId(1), window: 4, band: (0, 1) }).is_err());
        assert_eq!(h.entry_for(4).unwrap().window, 4);
        assert!(h.entry_for(3).is_none());
    }

    #[test]
    fn empty_history_reconstructs_empty_levels() {
        let cov = three_sets();
        let o = ValueOracle::strong(&cov);
        let f = reconstruct_levels(&History::new(), &o, 3, SmoothingRule::Greedy).unwrap();
        assert_eq!(f, LevelFamily::empty(3));
    }

    #[test]
    fn best_level_prefers_lower_on_ties() {
        let mut f = LevelFamily::empty(3);
        f.values = vec![0.0, 2.0, 5.0, 5.0];
        assert_eq!(f.best_level(), 2);
    }
}
