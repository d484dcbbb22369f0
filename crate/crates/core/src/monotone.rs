//! Window-based streaming maximization for monotone objectives.
//!
//! The stream is cut into `m = ⌈αk⌉` windows. In window `i` every arriving
//! element, plus each element of the history `H` resampled with probability
//! `1/m`, is scored by the sum of its marginals over the update band of
//! levels. The best candidate extends every band level by one if that raises
//! the band's total value; a smoothing sweep then restores
//! `f(L_ℓ) <= f(L_{ℓ+1})`.
//!
//! Elements are scored on arrival against the levels frozen at the start of
//! the window, so the algorithm holds `H`, the best candidate of the current
//! window and the arriving element.

use crate::error::{Error, Result};
use crate::levels::{beats, BandParams, BandScore, History, HistoryEntry, LevelFamily, SmoothingRule};
use crate::oracle::{ElementId, ValueOracle};
use crate::order::StreamOrder;
use crate::partition::{partition_stream, window_count, WindowPartition};
use crate::stream::{resample_history, RunStats, StreamConfig, StreamOutcome, StreamingAlgorithm, WindowTrace};

struct Candidate {
    element: ElementId,
    score: BandScore,
}

pub struct MonotoneStream<'o, 'f> {
    oracle: &'o ValueOracle<'f>,
    cfg: StreamConfig,
    band: BandParams,
    partition: WindowPartition,
    m: usize,
    levels: LevelFamily,
    history: History,
    position: usize,
    window: usize,
    best: Option<Candidate>,
    window_elements: Vec<ElementId>,
    stats: RunStats,
    start_queries: u64,
    trace: Option<Vec<WindowTrace>>,
}

impl<'o, 'f> MonotoneStream<'o, 'f> {
    /// Prepares a run over a stream of known length `n`.
    pub fn new(oracle: &'o ValueOracle<'f>, n: usize, cfg: StreamConfig) -> Result<Self> {
        let band = cfg.band();
        band.validate()?;
        if !oracle.is_monotone() {
            return Err(Error::Precondition("monotone streaming requires a monotone objective".into()));
        }
        if n == 0 {
            return Err(Error::InvalidInput("stream must contain at least one element".into()));
        }
        let m = window_count(cfg.alpha, cfg.k);
        let partition = partition_stream(n, m, cfg.seed)?;
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
            levels: LevelFamily::empty(cfg.k),
            history: History::new(),
            position: 0,
            window: 1,
            best: None,
            window_elements: Vec::new(),
            stats,
            start_queries: oracle.query_count(),
            trace: cfg.trace.then(Vec::new),
        })
    }

    pub fn partition(&self) -> &WindowPartition {
        &self.partition
    }

    pub fn levels(&self) -> &LevelFamily {
        &self.levels
    }

    pub fn history(&self) -> &History {
        &self.history
    }

    fn note_memory(&mut self, arriving: usize) {
        let live = self.history.len() + self.best.is_some() as usize + arriving;
        self.stats.peak_memory = self.stats.peak_memory.max(live);
    }

    fn close_window(&mut self) -> Result<()> {
        let i = self.window;
        let range = self.band.update_range(i);
        let resampled = resample_history(&self.history, self.cfg.seed, i, self.m);
        let mut best = self.best.take();
        for &e in &resampled {
            let score = match &range {
                Some(r) => self.levels.score(self.oracle, e, r)?,
                None => BandScore { score: 0.0, with_values: Vec::new() },
            };
            let better = match &best {
                None => true,
                Some(b) => beats(score.score, e, b.score.score, b.element),
            };
            if better {
                best = Some(Candidate { element: e, score });
            }
        }

        let mut accepted = false;
        if let (Some(b), Some(r)) = (&best, &range) {
            if self.levels.gate(r, &b.score.with_values) {
                self.history.push(HistoryEntry { element: b.element, window: i, band: (*r.start(), *r.end()) })?;
                self.levels.insert(b.element, r, &b.score.with_values);
                self.levels.smooth(SmoothingRule::Greedy, self.oracle)?;
                self.stats.updates += 1;
                accepted = true;
                debug_assert!(self.levels.values().windows(2).all(|w| w[0] <= w[1]));
            }
        }

        if let Some(trace) = self.trace.as_mut() {
            trace.push(WindowTrace {
                window: i,
                band: range.map(|r| (*r.start(), *r.end())),
                window_candidates: std::mem::take(&mut self.window_elements),
                resampled,
                winner: best.as_ref().map(|b| b.element),
                winner_score: best.as_ref().map(|b| b.score.score),
                accepted,
                levels: self.levels.clone(),
            });
        }
        self.window += 1;
        Ok(())
    }

    /// Closes all windows and assembles the outcome.
    pub fn into_outcome(mut self) -> Result<StreamOutcome> {
        self.finish()?;
        let best_level = self.levels.best_level();
        self.stats.queries = self.oracle.query_count() - self.start_queries;
        self.stats.max_query_size = self.oracle.max_query_size();
        Ok(StreamOutcome {
            best: self.levels.set(best_level).to_vec(),
            best_value: self.levels.value(best_level),
            levels: self.levels,
            history: self.history,
            stats: self.stats,
            trace: self.trace,
        })
    }
}

impl StreamingAlgorithm for MonotoneStream<'_, '_> {
    fn push(&mut self, e: ElementId) -> Result<()> {
        let w = self.partition.window_of(self.position)?;
        while self.window < w {
            self.close_window()?;
        }
        self.note_memory(1);
        let score = match self.band.update_range(w) {
            Some(r) => self.levels.score(self.oracle, e, &r)?,
            None => BandScore { score: 0.0, with_values: Vec::new() },
        };
        let better = match &self.best {
            None => true,
            Some(b) => beats(score.score, e, b.score.score, b.element),
        };
        if better {
            self.best = Some(Candidate { element: e, score });
        }
        if self.trace.is_some() {
            self.window_elements.push(e);
        }
        self.position += 1;
        Ok(())
    }

    fn live_elements(&self) -> usize {
        self.history.len() + self.best.as_ref().map_or(0, |b| !self.history.contains(b.element) as usize)
    }

    fn finish(&mut self) -> Result<Vec<ElementId>> {
        while self.window <= self.m {
            self.close_window()?;
        }
        Ok(self.levels.set(self.levels.best_level()).to_vec())
    }
}

/// Runs the monotone algorithm over `order`.
pub fn run_monotone(oracle: &ValueOracle<'_>, order: &StreamOrder, cfg: StreamConfig) -> Result<StreamOutcome> {
    let mut run = MonotoneStream::new(oracle, order.len(), cfg)?;
    for &e in order.elements() {
        run.push(e)?;
    }
    run.into_outcome()
}
