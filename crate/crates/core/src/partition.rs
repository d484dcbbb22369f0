//! Splitting a stream into contiguous windows with multinomial sizes, and the
//! active-window simulation.
//!
//! Windows are numbered from 1 to `m`. Each of the `n` stream positions draws
//! an independent uniform bucket; window `i` receives as many consecutive
//! positions as there were draws equal to `i`. Under a uniformly random
//! stream order this is the same law as assigning every element to an
//! independent uniform bucket.

use std::ops::Range;

use rand::Rng;

use crate::error::{Error, Result};
use crate::par;
use crate::rng::CounterRng;

pub const PARTITION_STREAM: u64 = 0x5041_5254; // "PART"
const ACTIVE_STREAM: u64 = 0x4143_5456; // "ACTV"

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WindowPartition {
    sizes: Vec<usize>,
    starts: Vec<usize>,
    ends: Vec<usize>,
}

impl WindowPartition {
    /// Builds a partition from explicit window sizes.
    pub fn from_sizes(sizes: Vec<usize>) -> Result<Self> {
        if sizes.is_empty() {
            return Err(Error::InvalidInput("a partition needs at least one window".into()));
        }
        let mut starts = Vec::with_capacity(sizes.len());
        let mut ends = Vec::with_capacity(sizes.len());
        let mut t = 0;
        for &s in &sizes {
            starts.push(t);
            t += s;
            ends.push(t);
        }
        Ok(Self { sizes, starts, ends })
    }

    pub fn window_count(&self) -> usize {
        self.sizes.len()
    }

    pub fn stream_len(&self) -> usize {
        *self.ends.last().unwrap()
    }

    /// Size of window `i` (1-based).
    pub fn size(&self, i: usize) -> usize {
        self.sizes[i - 1]
    }

    pub fn sizes(&self) -> &[usize] {
        &self.sizes
    }

    /// Stream positions covered by window `i` (1-based).
    pub fn range(&self, i: usize) -> Range<usize> {
        self.starts[i - 1]..self.ends[i - 1]
    }

    pub fn max_window_size(&self) -> usize {
        self.sizes.iter().copied().max().unwrap_or(0)
    }

    /// The unique 1-based window containing stream `position`.
    pub fn window_of(&self, position: usize) -> Result<usize> {
        if position >= self.stream_len() {
            return Err(Error::InvalidInput(format!(
                "position {position} outside stream of length {}",
                self.stream_len()
            )));
        }
        Ok(self.ends.partition_point(|&end| end <= position) + 1)
    }
}

/// Draws `n` independent uniform buckets in `1..=m` and turns the counts into
/// contiguous windows.
pub fn partition_stream(n: usize, m: usize, seed: u64) -> Result<WindowPartition> {
    if m == 0 {
        return Err(Error::InvalidInput("window count must be at least 1".into()));
    }
    let mut cursor = CounterRng::new(seed, PARTITION_STREAM).cursor(0);
    let mut sizes = vec![0usize; m];
    for _ in 0..n {
        sizes[cursor.random_range(0..m)] += 1;
    }
    WindowPartition::from_sizes(sizes)
}

/// Window count used by the streaming algorithms: `⌈αk⌉`.
pub fn window_count(alpha: f64, k: usize) -> usize {
    ((alpha * k as f64).ceil() as usize).max(1)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ActiveWindowStats {
    pub windows: usize,
    pub mean: f64,
    pub stdev: f64,
}

/// Monte Carlo estimate of the number of active windows among the first
/// `⌊αβ⌋`, where each of `k` optimal elements independently lands in each
/// window's active set with probability `1/(αk)`.
pub fn simulate_active_windows(k: usize, alpha: f64, beta: f64, trials: usize, seed: u64) -> Result<ActiveWindowStats> {
    if k == 0 || alpha < 1.0 || beta <= 0.0 || trials == 0 {
        return Err(Error::InvalidInput(format!(
            "need k >= 1, alpha >= 1, beta > 0, trials >= 1 (got k={k}, alpha={alpha}, beta={beta}, trials={trials})"
        )));
    }
    let windows = (alpha * beta).floor() as usize;
    let p = 1.0 / (alpha * k as f64);
    let base = CounterRng::new(seed, ACTIVE_STREAM);
    let counts = par::map_range(trials, |t| {
        let rng = base.substream(t as u64);
        (0..windows)
            .filter(|&w| (0..k).any(|o| rng.f64_at((w * k + o) as u64) < p))
            .count() as f64
    });
    let mean = counts.iter().sum::<f64>() / trials as f64;
    let stdev = if trials > 1 {
        (counts.iter().map(|c| (c - mean).powi(2)).sum::<f64>() / (trials - 1) as f64).sqrt()
    } else {
        0.0
    };
    Ok(ActiveWindowStats { windows, mean, stdev })
}
