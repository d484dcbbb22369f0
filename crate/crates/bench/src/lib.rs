//! Experiment driver for the streaming algorithms and baselines: dataset
//! loading, seeded runs, CSV output and summaries.

pub mod datasets;
pub mod error;
pub mod experiment;
pub mod hardness;
pub mod output;
pub mod summary;

pub use error::{BenchError, Result};
pub use experiment::{run_experiment, Algorithm, ExperimentConfig, Reference, RunRecord};
pub use hardness::{run_hardness, HardnessConfig, HardnessReport};
