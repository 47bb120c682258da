//! Sampling from the Bernoulli measure on words, certified coded points,
//! digit streams and orbits.

pub mod ball;
pub mod digits;
pub mod orbit;
pub mod point;
pub mod words;

pub use ball::{beta_orbit, power_orbit, RealParam};
pub use digits::{digits, exact_digits, DigitStream, DEFAULT_GUARD};
pub use orbit::{orbit_sequence, tail_digits, uniform_sample, uniform_sample_for_task, SequenceSample};
pub use point::{point_of_word, PointApproximation};
pub use words::{sample_word, FiniteWord, PeriodicWord, SampledWords, WordSource, RNG_ALGORITHM};

use crate::ifs::IfsError;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum SamplingError {
    #[error("precision exhausted: {0}")]
    PrecisionExhausted(String),
    #[error("need {needed} certified digits, have {available}")]
    InsufficientDigits { needed: usize, available: usize },
    #[error("orbit ball straddles a discontinuity at step {index}")]
    BallStraddlesCut { index: u64, partial: Box<SequenceSample> },
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error(transparent)]
    System(#[from] IfsError),
}
