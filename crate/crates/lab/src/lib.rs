//! Experiment harness around `bsa-core`: sweeps over dimensions and search
//! ranges, seeded parallel execution with resumable record files, paired
//! Wilcoxon comparisons against BSA, and report rendering.

pub mod cli;
pub mod config;
pub mod error;
pub mod harness;
pub mod report;
pub mod store;
pub mod validate;

pub use config::{ExperimentSpec, Metric, Mode, Profile};
pub use error::{LabError, Result};
pub use harness::{
    pairwise_bsa_comparison, run_dimension_sweep, run_range_sweep, success_ratio, RunRecord,
};
