//! Descriptive statistics over repeated runs and the paired Wilcoxon
//! signed-rank test.

mod descriptive;
mod wilcoxon;

pub use descriptive::{describe, DescriptiveStats};
pub use wilcoxon::{
    exact_null_counts, verdict_summary, wilcoxon_signed_rank, Method, Verdict, VerdictSummary,
    WilcoxonResult,
};
