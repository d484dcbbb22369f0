//! Random-order streaming submodular maximization under a cardinality
//! constraint.
//!
//! The crate provides:
//!
//! - value oracles with query accounting and weak/strong access modes
//!   ([`oracle`], [`oracles`]),
//! - window partitioning of a random-order stream ([`partition`]),
//! - the multi-level streaming algorithms for monotone ([`monotone`]) and
//!   non-monotone ([`nonmonotone`]) objectives,
//! - offline and streaming baselines ([`baselines`]),
//! - a symmetric coverage hardness instance with a memory-bounded harness
//!   ([`hardness`]).
//!
//! Randomness is counter-based ([`rng`]): every draw is a pure function of a
//! seed, a stream key and a counter, so runs are reproducible and past draws
//! can be recomputed instead of stored.

pub mod baselines;
pub mod brute;
pub mod error;
pub mod hardness;
pub mod levels;
pub mod monotone;
pub mod nonmonotone;
pub mod oracle;
pub mod oracles;
pub mod order;
pub mod par;
pub mod partition;
pub mod rng;
pub mod stream;

pub use brute::brute_force_opt;
pub use error::{Error, Result};
pub use levels::{BandParams, History, LevelFamily};
pub use monotone::run_monotone;
pub use nonmonotone::run_nonmonotone;
pub use oracle::{marginal, ElementId, OracleMode, SetFunction, ValueOracle};
pub use order::{random_permutation, StreamOrder};
pub use stream::{RunStats, StreamConfig, StreamOutcome, StreamingAlgorithm};
