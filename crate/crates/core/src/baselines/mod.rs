//! Reference algorithms: offline lazy greedy, threshold sieve streaming and
//! randomized greedy for non-monotone objectives.

mod lazy;
mod random_greedy;
mod sieve;

pub use lazy::{lazy_greedy, lazy_greedy_over, StoreAll};
pub use random_greedy::random_greedy;
pub use sieve::{sieve_set_bound, sieve_streaming, SieveStreaming, DEFAULT_SIEVE_EPS};

use crate::oracle::ElementId;

/// Output of an offline or streaming baseline.
#[derive(Clone, Debug, PartialEq)]
pub struct Selection {
    /// Elements in insertion order.
    pub set: Vec<ElementId>,
    pub value: f64,
}
