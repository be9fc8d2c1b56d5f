//! Experiment harness over `complexity-core`: seeded, deterministic runs of
//! the β-sweep, single-system measurement, and the two Hopfield learning
//! experiments, each emitting CSV with the full configuration in `#` header
//! lines.
//!
//! Determinism contract: every experiment fans trials out over a worker
//! pool, but each trial draws from its own RNG substream (ChaCha12, stream =
//! trial index) and rows are assembled in (trial, x) order, so a fixed
//! (config, seed) produces byte-identical CSV at any worker count.

pub mod config;
pub mod experiments;
pub mod output;
pub mod validate;

pub use config::{
    ConfigError, HopfieldCapacityConfig, HopfieldLearnConfig, MeasureConfig, SweepConfig,
    MAX_DENSE_NODES,
};
pub use experiments::{measure_weights, sweep_beta, MeasureRow, SweepRow};
pub use validate::{validate_csv_text, ValidationReport};
