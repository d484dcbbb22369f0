//! Window-based streaming maximization for non-monotone objectives.
//!
//! Same skeleton as the monotone algorithm, with two changes:
//!
//! - an arriving element `e` of window `j` enters the candidate pool only if
//!   its draw `x_e^j` is at most `q_e^j = (m - j + |A_e^j| + 1)/m`, where
//!   `A_e^j` is the set of earlier windows in which `e` would not have been
//!   selected. This thins candidates so that every element is in the pool of
//!   every window with probability exactly `1/m`;
//! - smoothing copies `L_ℓ` into `L_{ℓ+1}` instead of choosing an element.
//!
//! Draws are recomputed from the counter-based RNG, and the level families of
//! earlier windows are replayed from the history, so `A_e^j` needs only the
//! per-window records.

use crate::error::{Error, Result};
use crate::levels::{beats, nesting_violations, BandParams, BandScore, History, HistoryEntry, LevelFamily};
use crate::oracle::{ElementId, ValueOracle};
use crate::order::StreamOrder;
use crate::partition::{partition_stream, window_count, WindowPartition};
use crate::rng::CounterRng;
use crate::stream::{resample_history, RunStats, StreamConfig, StreamOutcome, StreamingAlgorithm, WindowTrace};

pub const SUBSAMPLE_STREAM: u64 = 0x5355_4253; // "SUBS"

/// When a past window counts as one where `e` would not have been selected.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum RejectionRule {
    /// `e` loses to the recorded winner or fails its draw.
    Literal,
    /// As `Literal`, and also when `e` would win but the improvement gate
    /// would have rejected the update.
    #[default]
    GateAware,
}

/// `q = (m - j + a + 1)/m`.
pub fn subsample_threshold(j: usize, a_size: usize, m: usize) -> f64 {
    debug_assert!(j >= 1 && a_size < j && j <= m);
    (m - j + a_size + 1) as f64 / m as f64
}

/// `x_e^j`, uniform in `[0, 1)`.
pub fn subsample_draw(seed: u64, e: ElementId, j: usize) -> f64 {
    CounterRng::new(seed, SUBSAMPLE_STREAM).substream(e.0 as u64).f64_at(j as u64)
}

/// What happened in one window.
#[derive(Clone, Debug, PartialEq)]
pub struct WindowRecord {
    pub window: usize,
    pub winner: Option<ElementId>,
    /// `f_i`, the winner's band score; present iff `winner` is.
    pub winner_score: Option<f64>,
    pub band: Option<(usize, usize)>,
    pub accepted: bool,
}

/// Subsampling decision for one arriving element.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SubsampleDraw {
    pub element: ElementId,
    pub window: usize,
    pub rejections: usize,
    pub threshold: f64,
    pub draw: f64,
    pub admitted: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ReplayCost {
    pub element: ElementId,
    pub window: usize,
    pub evals: u64,
}

/// Oracle evaluations spent replaying past windows, per stream element.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct ReplayAudit {
    pub per_element: Vec<ReplayCost>,
    pub replay_evals: u64,
    pub other_evals: u64,
}

impl ReplayAudit {
    pub fn total_evals(&self) -> u64 {
        self.replay_evals + self.other_evals
    }

    /// Mean replay cost of the elements of each window `1..=m`; `None` for
    /// empty windows.
    pub fn mean_by_window(&self, m: usize) -> Vec<Option<f64>> {
        let mut sums = vec![(0u64, 0u64); m];
        for c in &self.per_element {
            sums[c.window - 1].0 += c.evals;
            sums[c.window - 1].1 += 1;
        }
        sums.into_iter().map(|(s, n)| (n > 0).then(|| s as f64 / n as f64)).collect()
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NonMonotoneConfig {
    pub stream: StreamConfig,
    pub rule: RejectionRule,
}

impl From<StreamConfig> for NonMonotoneConfig {
    fn from(stream: StreamConfig) -> Self {
        Self { stream, rule: RejectionRule::default() }
    }
}

impl NonMonotoneConfig {
    pub fn with_rule(mut self, rule: RejectionRule) -> Self {
        self.rule = rule;
        self
    }
}

#[derive(Clone, Debug)]
pub struct NonMonotoneOutcome {
    pub outcome: StreamOutcome,
    pub records: Vec<WindowRecord>,
    pub replay: ReplayAudit,
    /// Filled when tracing.
    pub draws: Option<Vec<SubsampleDraw>>,
}

struct ReplayResult {
    rejected: Vec<Vec<usize>>,
    own_evals: Vec<u64>,
    shared_evals: u64,
}

struct Replay<'a> {
    params: BandParams,
    seed: u64,
    m: usize,
    rule: RejectionRule,
    records: &'a [WindowRecord],
    history: &'a History,
}

impl Replay<'_> {
    /// `A_e^j` for every `e` in `elements`, replaying `L^0..L^{j-2}`.
    fn run(&self, oracle: &ValueOracle<'_>, elements: &[ElementId], j: usize) -> Result<ReplayResult> {
        if self.records.len() + 1 < j {
            return Err(Error::MalformedHistory(format!(
                "{} window records cannot cover windows before {j}",
                self.records.len()
            )));
        }
        let mut levels = LevelFamily::empty(self.params.k);
        let mut rejected = vec![Vec::new(); elements.len()];
        let mut own_evals = vec![0u64; elements.len()];
        let mut shared_evals = 0;
        for r in 1..j {
            let record = &self.records[r - 1];
            if record.window != r {
                return Err(Error::MalformedHistory(format!("record {} found at window {r}", record.window)));
            }
            let range = self.params.update_range(r);
            for (idx, &e) in elements.iter().enumerate() {
                let before = oracle.query_count();
                let score = match &range {
                    Some(rg) => levels.score(oracle, e, rg)?,
                    None => BandScore { score: 0.0, with_values: Vec::new() },
                };
                own_evals[idx] += oracle.query_count() - before;
                let wins = match (record.winner, record.winner_score) {
                    (Some(w), Some(f)) => beats(score.score, e, f, w),
                    _ => true,
                };
                let selected = wins
                    && match self.rule {
                        RejectionRule::Literal => true,
                        RejectionRule::GateAware => {
                            range.as_ref().is_some_and(|rg| levels.gate(rg, &score.with_values))
                        }
                    };
                let q = subsample_threshold(r, rejected[idx].len(), self.m);
                if !selected || subsample_draw(self.seed, e, r) > q {
                    rejected[idx].push(r);
                }
            }
            if let Some(entry) = self.history.entry_for(r) {
                let before = oracle.query_count();
                let rg = entry.band.0..=entry.band.1;
                let s = levels.score(oracle, entry.element, &rg)?;
                levels.insert(entry.element, &rg, &s.with_values);
                levels.smooth_copy();
                shared_evals += oracle.query_count() - before;
            }
        }
        Ok(ReplayResult { rejected, own_evals, shared_evals })
    }
}

/// `A_e^j`: the windows `r < j` in which `e` would not have been selected,
/// given the records and history of a run.
#[allow(clippy::too_many_arguments)]
pub fn rejection_set(
    oracle: &ValueOracle<'_>,
    e: ElementId,
    j: usize,
    records: &[WindowRecord],
    history: &History,
    params: BandParams,
    seed: u64,
    rule: RejectionRule,
) -> Result<Vec<usize>> {
    let m = window_count(params.alpha, params.k);
    let replay = Replay { params, seed, m, rule, records, history };
    Ok(replay.run(oracle, &[e], j)?.rejected.pop().unwrap())
}

pub struct NonMonotoneStream<'o, 'f> {
    oracle: &'o ValueOracle<'f>,
    cfg: NonMonotoneConfig,
    band: BandParams,
    partition: WindowPartition,
    m: usize,
    levels: LevelFamily,
    history: History,
    records: Vec<WindowRecord>,
    position: usize,
    window: usize,
    buffer: Vec<ElementId>,
    stats: RunStats,
    start_queries: u64,
    replay: ReplayAudit,
    trace: Option<Vec<WindowTrace>>,
    draws: Option<Vec<SubsampleDraw>>,
}

impl<'o, 'f> NonMonotoneStream<'o, 'f> {
    pub fn new(oracle: &'o ValueOracle<'f>, n: usize, cfg: impl Into<NonMonotoneConfig>) -> Result<Self> {
        let cfg = cfg.into();
        let sc = cfg.stream;
        let band = sc.band();
        band.validate()?;
        if n == 0 {
            return Err(Error::InvalidInput("stream must contain at least one element".into()));
        }
        let m = window_count(sc.alpha, sc.k);
        let partition = partition_stream(n, m, sc.seed)?;
        let stats = RunStats {
            windows: m,
            max_window_size: partition.max_window_size(),
            ..RunStats::default()
        };
        Ok(Self {
            oracle,
            cfg,
            band,
            partition,
            m,
            levels: LevelFamily::empty(sc.k),
            history: History::new(),
            records: Vec::with_capacity(m),
            position: 0,
            window: 1,
            buffer: Vec::new(),
            stats,
            start_queries: oracle.query_count(),
            replay: ReplayAudit::default(),
            trace: sc.trace.then(Vec::new),
            draws: sc.trace.then(Vec::new),
        })
    }

    pub fn records(&self) -> &[WindowRecord] {
        &self.records
    }

    pub fn levels(&self) -> &LevelFamily {
        &self.levels
    }

    fn close_window(&mut self) -> Result<()> {
        let i = self.window;
        let seed = self.cfg.stream.seed;
        let pending = std::mem::take(&mut self.buffer);

        let mut admitted = Vec::new();
        if !pending.is_empty() {
            let replay = Replay {
                params: self.band,
                seed,
                m: self.m,
                rule: self.cfg.rule,
                records: &self.records,
                history: &self.history,
            };
            let result = replay.run(self.oracle, &pending, i)?;
            let share = result.shared_evals / pending.len() as u64;
            let extra = (result.shared_evals % pending.len() as u64) as usize;
            for (idx, &e) in pending.iter().enumerate() {
                let evals = result.own_evals[idx] + share + (idx < extra) as u64;
                self.replay.per_element.push(ReplayCost { element: e, window: i, evals });
                self.replay.replay_evals += evals;
                let rejections = result.rejected[idx].len();
                let threshold = subsample_threshold(i, rejections, self.m);
                let draw = subsample_draw(seed, e, i);
                let ok = draw <= threshold;
                if ok {
                    admitted.push(e);
                }
                if let Some(d) = self.draws.as_mut() {
                    d.push(SubsampleDraw { element: e, window: i, rejections, threshold, draw, admitted: ok });
                }
            }
        }

        let range = self.band.update_range(i);
        let resampled = resample_history(&self.history, seed, i, self.m);
        let mut best: Option<(ElementId, BandScore)> = None;
        for &e in admitted.iter().chain(&resampled) {
            let score = match &range {
                Some(r) => self.levels.score(self.oracle, e, r)?,
                None => BandScore { score: 0.0, with_values: Vec::new() },
            };
            if best.as_ref().is_none_or(|(be, bs)| beats(score.score, e, bs.score, *be)) {
                best = Some((e, score));
            }
        }

        let prev = cfg!(debug_assertions).then(|| self.levels.clone());
        let mut accepted = false;
        if let (Some((e, s)), Some(r)) = (&best, &range) {
            if self.levels.gate(r, &s.with_values) {
                self.history.push(HistoryEntry { element: *e, window: i, band: (*r.start(), *r.end()) })?;
                self.levels.insert(*e, r, &s.with_values);
                self.levels.smooth_copy();
                self.stats.updates += 1;
                accepted = true;
            }
        }
        if let Some(prev) = prev {
            if i > 1 && prev.values().iter().all(|&v| v >= 0.0) {
                let skip = Some(self.band.touched_band(i));
                debug_assert!(nesting_violations(&prev, &self.levels, skip).is_empty());
            }
        }

        self.records.push(WindowRecord {
            window: i,
            winner: best.as_ref().map(|b| b.0),
            winner_score: best.as_ref().map(|b| b.1.score),
            band: range.as_ref().map(|r| (*r.start(), *r.end())),
            accepted,
        });
        if let Some(trace) = self.trace.as_mut() {
            trace.push(WindowTrace {
                window: i,
                band: range.map(|r| (*r.start(), *r.end())),
                window_candidates: admitted,
                resampled,
                winner: best.as_ref().map(|b| b.0),
                winner_score: best.as_ref().map(|b| b.1.score),
                accepted,
                levels: self.levels.clone(),
            });
        }
        self.window += 1;
        Ok(())
    }

    pub fn into_outcome(mut self) -> Result<NonMonotoneOutcome> {
        self.finish()?;
        let best_level = self.levels.best_level();
        self.stats.queries = self.oracle.query_count() - self.start_queries;
        self.stats.max_query_size = self.oracle.max_query_size();
        self.replay.other_evals = self.stats.queries - self.replay.replay_evals;
        Ok(NonMonotoneOutcome {
            outcome: StreamOutcome {
                best: self.levels.set(best_level).to_vec(),
                best_value: self.levels.value(best_level),
                levels: self.levels,
                history: self.history,
                stats: self.stats,
                trace: self.trace,
            },
            records: self.records,
            replay: self.replay,
            draws: self.draws,
        })
    }
}

impl StreamingAlgorithm for NonMonotoneStream<'_, '_> {
    fn push(&mut self, e: ElementId) -> Result<()> {
        let w = self.partition.window_of(self.position)?;
        while self.window < w {
            self.close_window()?;
        }
        self.buffer.push(e);
        let live = self.history.len() + self.buffer.len();
        self.stats.peak_memory = self.stats.peak_memory.max(live);
        self.position += 1;
        Ok(())
    }

    fn live_elements(&self) -> usize {
        self.history.len() + self.buffer.len()
    }

    fn finish(&mut self) -> Result<Vec<ElementId>> {
        while self.window <= self.m {
            self.close_window()?;
        }
        Ok(self.levels.set(self.levels.best_level()).to_vec())
    }
}

/// Runs the non-monotone algorithm over `order`.
pub fn run_nonmonotone(
    oracle: &ValueOracle<'_>,
    order: &StreamOrder,
    cfg: impl Into<NonMonotoneConfig>,
) -> Result<NonMonotoneOutcome> {
    let mut run = NonMonotoneStream::new(oracle, order.len(), cfg)?;
    for &e in order.elements() {
        run.push(e)?;
    }
    run.into_outcome()
}
