//! Types shared by the window-based streaming algorithms and the
//! memory-bounded harness.

use std::fmt;

use crate::error::Result;
use crate::levels::{BandParams, History, LevelFamily};
use crate::oracle::ElementId;
use crate::rng::CounterRng;

pub const RESAMPLE_STREAM: u64 = 0x5253_4D50; // "RSMP"

/// An algorithm that consumes a stream one element at a time and exposes how
/// many input elements it currently stores.
pub trait StreamingAlgorithm {
    fn push(&mut self, e: ElementId) -> Result<()>;

    /// Distinct input elements held right now.
    fn live_elements(&self) -> usize;

    /// Ends the stream and returns the chosen solution.
    fn finish(&mut self) -> Result<Vec<ElementId>>;
}

/// Parameters of one streaming run.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct StreamConfig {
    pub k: usize,
    pub alpha: f64,
    pub band_const: f64,
    /// Seeds the window partition and every in-run random choice.
    pub seed: u64,
    /// Collect a per-window [`WindowTrace`].
    pub trace: bool,
}

impl StreamConfig {
    pub fn new(k: usize, alpha: f64, seed: u64) -> Self {
        Self { k, alpha, band_const: BandParams::DEFAULT_BAND_CONST, seed, trace: false }
    }

    pub fn with_band_const(mut self, band_const: f64) -> Self {
        self.band_const = band_const;
        self
    }

    pub fn with_trace(mut self) -> Self {
        self.trace = true;
        self
    }

    pub fn band(&self) -> BandParams {
        BandParams { alpha: self.alpha, band_const: self.band_const, k: self.k }
    }
}

/// Draws `R_i`: each element of `H` joins independently with probability
/// `1/m`, keyed by `(seed, element, window)`.
pub fn resample_history(history: &History, seed: u64, window: usize, m: usize) -> Vec<ElementId> {
    let base = CounterRng::new(seed, RESAMPLE_STREAM);
    let p = 1.0 / m as f64;
    history
        .elements()
        .iter()
        .copied()
        .filter(|e| base.substream(e.0 as u64).f64_at(window as u64) < p)
        .collect()
}

/// Accounting for one run.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct RunStats {
    pub queries: u64,
    pub max_query_size: usize,
    /// Peak number of distinct input elements held at once.
    pub peak_memory: usize,
    pub windows: usize,
    pub max_window_size: usize,
    /// Level updates performed (gate passed).
    pub updates: usize,
}

/// Per-window record of what a run did.
#[derive(Clone, Debug, PartialEq)]
pub struct WindowTrace {
    pub window: usize,
    /// Update range `[z_l, z_h']`, `None` when empty.
    pub band: Option<(usize, usize)>,
    /// Window elements that entered `C_i` (all of them for the monotone
    /// algorithm, the subsampled ones otherwise).
    pub window_candidates: Vec<ElementId>,
    /// `R_i`, elements of `H` resampled into `C_i`.
    pub resampled: Vec<ElementId>,
    pub winner: Option<ElementId>,
    pub winner_score: Option<f64>,
    pub accepted: bool,
    pub levels: LevelFamily,
}

impl fmt::Display for WindowTrace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let list = |v: &[ElementId]| v.iter().map(|e| e.to_string()).collect::<Vec<_>>().join(",");
        write!(f, "w{} band=", self.window)?;
        match self.band {
            Some((lo, hi)) => write!(f, "[{lo},{hi}]")?,
            None => write!(f, "-")?,
        }
        write!(f, " C={{{}}} R={{{}}}", list(&self.window_candidates), list(&self.resampled))?;
        match (self.winner, self.winner_score) {
            (Some(e), Some(s)) => write!(f, " e*={e} score={s}")?,
            _ => write!(f, " e*=-")?,
        }
        write!(f, " {} | {}", if self.accepted { "update" } else { "keep" }, self.levels)
    }
}

/// Result of a window-based streaming run.
#[derive(Clone, Debug)]
pub struct StreamOutcome {
    pub best: Vec<ElementId>,
    pub best_value: f64,
    pub levels: LevelFamily,
    pub history: History,
    pub stats: RunStats,
    pub trace: Option<Vec<WindowTrace>>,
}
