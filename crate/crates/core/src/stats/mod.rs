//! Count generators, reference CDFs and the Kolmogorov-Smirnov harness.
//!
//! Counts are drawn with ChaCha8 (`rand_chacha`) seeded through
//! `SeedableRng::seed_from_u64`, so a `(spec, n, seed)` triple gives the
//! same counts on every platform.

mod dist;
mod experiment;
mod ks;
mod reference;
pub mod special;

use thiserror::Error;

pub use dist::{generate_counts, CountSampler, DistributionSpec, MAX_REDRAWS};
pub use experiment::{
    ntd_series, run_ntd_experiment, table1_fits, ExperimentReport, FitCase, KsEntry,
    SeriesTransform,
};
pub use ks::{ks_coefficient, ks_critical, ks_curve, ks_statistic, KsResult, DEFAULT_ALPHA};
pub use reference::{reference_cdf, ParamMode, ReferenceDist};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum StatsError {
    #[error("invalid distribution: {0}")]
    InvalidSpec(String),
    #[error("{0}")]
    Parse(String),
    #[error("empty sample")]
    EmptySample,
    #[error("series of length {len} is too short (need at least {min})")]
    TooShort { len: usize, min: usize },
    #[error("zero count at position {index} makes the ratio undefined")]
    ZeroCount { index: usize },
    #[error("no count >= 1 after {0} redraws")]
    TruncationExhausted(usize),
}
