//! Equidistribution and fine-scale statistics of sequences mod 1.

pub mod correlation;
pub mod spacings;
pub mod uniformity;

pub use correlation::{k_level_correlation, CorrelationResult, TestFunction};
pub use spacings::{default_grid, level_spacings, SpacingReport};
pub use uniformity::{digit_frequencies, discrepancy, weyl_report, BlockFrequencies, WeylReport};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum StatsError {
    #[error("block length {block} exceeds the {available} certified digits")]
    BlockLongerThanStream { block: usize, available: usize },
    #[error("test function support {support} must be below N/2 = {}", *.n as f64 / 2.0)]
    SupportTooWide { support: f64, n: usize },
    #[error("k = {0} is outside 2..=4")]
    KOutOfRange(usize),
    #[error("sample is empty")]
    EmptySample,
    #[error("invalid input: {0}")]
    InvalidInput(String),
}
