use super::StatsError;
use crate::fourier::{fourier_empirical, FourierValue};
use crate::sampling::{DigitStream, SequenceSample};
use serde::Serialize;

/// Star discrepancy `sup_t |#{x_n < t}/N − t|` of the values mod 1.
pub fn discrepancy(sample: &SequenceSample) -> Result<f64, StatsError> {
    if sample.is_empty() {
        return Err(StatsError::EmptySample);
    }
    let mut x: Vec<f64> = sample.values.iter().map(|v| v.rem_euclid(1.0)).collect();
    x.sort_by(f64::total_cmp);
    let n = x.len() as f64;
    let mut d: f64 = 0.0;
    for (i, &v) in x.iter().enumerate() {
        let i = i as f64;
        d = d.max((i + 1.0) / n - v).max(v - i / n);
    }
    Ok(d)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BlockFrequencies {
    pub base: u32,
    pub block_length: usize,
    /// Count of each block, indexed by its value read in base `b`.
    pub counts: Vec<u64>,
    pub windows: u64,
    /// `max |frequency − b^{-L}|` over all blocks.
    pub max_deviation: f64,
}

impl BlockFrequencies {
    pub fn frequency(&self, block: usize) -> f64 {
        self.counts[block] as f64 / self.windows as f64
    }
}

/// Largest table of block counts allowed.
pub const MAX_BLOCKS: u64 = 1 << 24;

/// Sliding-window counts of the length-`L` blocks of the certified digits.
pub fn digit_frequencies(stream: &DigitStream, block_length: usize) -> Result<BlockFrequencies, StatsError> {
    let len = stream.certified_length.min(stream.digits.len());
    if block_length == 0 || block_length > len {
        return Err(StatsError::BlockLongerThanStream {
            block: block_length,
            available: len,
        });
    }
    let b = stream.base as u64;
    let size = b
        .checked_pow(block_length as u32)
        .filter(|&s| s <= MAX_BLOCKS)
        .ok_or_else(|| StatsError::InvalidInput(format!("{b}^{block_length} blocks exceed the table limit")))?;
    let mut counts = vec![0u64; size as usize];
    let digits = &stream.digits[..len];
    let mut key = digits[..block_length - 1].iter().fold(0u64, |acc, &d| acc * b + d as u64);
    for &d in &digits[block_length - 1..] {
        key = (key * b + d as u64) % size;
        counts[key as usize] += 1;
    }
    let windows = (len - block_length + 1) as u64;
    let expected = 1.0 / size as f64;
    let max_deviation = counts
        .iter()
        .map(|&c| (c as f64 / windows as f64 - expected).abs())
        .fold(0.0, f64::max);
    Ok(BlockFrequencies {
        base: stream.base,
        block_length,
        counts,
        windows,
        max_deviation,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WeylRow {
    pub q: i64,
    pub value: FourierValue,
    pub modulus: f64,
    pub flagged: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WeylReport {
    pub threshold: f64,
    pub rows: Vec<WeylRow>,
    pub max_modulus: f64,
}

/// `|F_q|` of the empirical measure for `q = 1 … q_max`, flagging moduli
/// above `threshold`.
pub fn weyl_report(sample: &SequenceSample, q_max: i64, threshold: f64) -> Result<WeylReport, StatsError> {
    if q_max < 1 {
        return Err(StatsError::InvalidInput(format!("q_max {q_max} must be at least 1")));
    }
    if sample.is_empty() {
        return Err(StatsError::EmptySample);
    }
    let rows: Vec<WeylRow> = (1..=q_max)
        .map(|q| {
            let value = fourier_empirical(sample, q);
            let modulus = value.modulus();
            WeylRow {
                q,
                flagged: modulus > threshold,
                modulus,
                value,
            }
        })
        .collect();
    let max_modulus = rows.iter().map(|r| r.modulus).fold(0.0, f64::max);
    Ok(WeylReport {
        threshold,
        rows,
        max_modulus,
    })
}
