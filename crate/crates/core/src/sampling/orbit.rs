use super::digits::DigitStream;
use super::words::RNG_ALGORITHM;
use super::SamplingError;
use crate::rational::ONE_MINUS_ULP;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use serde::Serialize;

/// A finite sequence in `[0, 1)` with a per-value error bound.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SequenceSample {
    pub values: Vec<f64>,
    pub errors: Vec<f64>,
    /// Index `n` of the first value (`x_n`).
    pub start: u64,
    pub source: String,
    pub seed: Option<u64>,
    pub rng: Option<String>,
}

impl SequenceSample {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn max_error(&self) -> f64 {
        self.errors.iter().cloned().fold(0.0, f64::max)
    }

    /// An exact sequence (all error bounds zero).
    pub fn from_values(values: Vec<f64>, source: impl Into<String>) -> Self {
        let errors = vec![0.0; values.len()];
        SequenceSample {
            values,
            errors,
            start: 0,
            source: source.into(),
            seed: None,
            rng: None,
        }
    }
}

/// Digits needed after position `n` to pin down `T_b^n x` to 53 bits.
pub fn tail_digits(base: u32) -> usize {
    (53.0 * 2f64.ln() / (base as f64).ln()).ceil() as usize
}

/// `T_b^n(x mod 1)` for `n = 0 … count-1`, read off the digit stream.
pub fn orbit_sequence(stream: &DigitStream, count: usize) -> Result<SequenceSample, SamplingError> {
    let k = tail_digits(stream.base);
    let needed = if count == 0 { 0 } else { count - 1 + k };
    if stream.certified_length < needed {
        return Err(SamplingError::InsufficientDigits {
            needed,
            available: stream.certified_length,
        });
    }
    let b = stream.base as u128;
    let scale = (b as f64).powi(k as i32);
    // Truncation leaves at most b^-k; the conversion adds two roundings.
    let err = scale.recip() + 2f64.powi(-52);
    let d = &stream.digits;
    let values = (0..count)
        .map(|n| {
            let window = d[n..n + k].iter().fold(0u128, |acc, &x| acc * b + x as u128);
            let v = window as f64 / scale;
            if v >= 1.0 {
                ONE_MINUS_ULP
            } else {
                v
            }
        })
        .collect();
    Ok(SequenceSample {
        values,
        errors: vec![err; count],
        start: 0,
        source: format!("T_{} orbit, word depth {}", stream.base, stream.depth()),
        seed: None,
        rng: None,
    })
}

/// I.i.d. uniform values on `[0, 1)`.
pub fn uniform_sample(count: usize, seed: u64) -> SequenceSample {
    uniform_sample_for_task(count, seed, 0)
}

/// [`uniform_sample`] on the independent stream `task`.
pub fn uniform_sample_for_task(count: usize, seed: u64, task: u64) -> SequenceSample {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    rng.set_stream(task);
    let values = (0..count).map(|_| rng.random::<f64>()).collect();
    SequenceSample {
        values,
        errors: vec![0.0; count],
        start: 1,
        source: "iid uniform".into(),
        seed: Some(seed),
        rng: Some(RNG_ALGORITHM.into()),
    }
}
