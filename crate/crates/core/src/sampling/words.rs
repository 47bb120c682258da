//! Symbol sequences: seeded Bernoulli samples, eventually periodic words,
//! and finite words.

use crate::ifs::{IfsError, SelfSimilarSystem, Word};
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;

/// Name of the generator behind every seeded sample, recorded in output metadata.
pub const RNG_ALGORITHM: &str = "ChaCha20 (rand_chacha 0.9, seed_from_u64, stream = task index)";

/// A symbol sequence that can be read lazily.
pub trait WordSource {
    /// The first `len` symbols, or `None` if the source cannot supply that many.
    fn prefix(&mut self, len: usize) -> Option<&[u32]>;

    /// The exact coded point, when the source knows its whole tail.
    fn exact_point(&self, _system: &SelfSimilarSystem) -> Option<BigRational> {
        None
    }

    fn describe(&self) -> String;
}

/// Seeded generator that draws symbol `i` with probability `p_i`.
#[derive(Debug, Clone)]
pub struct SymbolSampler {
    thresholds: Thresholds,
}

#[derive(Debug, Clone)]
enum Thresholds {
    // Cumulative integer weights over a common denominator that fits in u64.
    Exact { cumulative: Vec<u64>, total: u64 },
    Float(Vec<f64>),
}

impl SymbolSampler {
    pub fn new(system: &SelfSimilarSystem) -> Self {
        let weights = system.weights();
        let mut den = BigInt::one();
        for w in weights {
            den = den.lcm(w.denom());
        }
        let ints: Option<Vec<u64>> = weights
            .iter()
            .map(|w| (w.numer() * (&den / w.denom())).to_u64())
            .collect();
        let thresholds = match (ints, den.to_u64()) {
            (Some(ints), Some(total)) => {
                let mut acc = 0u64;
                let cumulative = ints
                    .iter()
                    .map(|v| {
                        acc += v;
                        acc
                    })
                    .collect();
                Thresholds::Exact { cumulative, total }
            }
            _ => {
                let mut acc = 0.0;
                let mut cumulative: Vec<f64> = weights
                    .iter()
                    .map(|w| {
                        acc += crate::rational::to_f64(w);
                        acc
                    })
                    .collect();
                *cumulative.last_mut().expect("at least two maps") = 1.0;
                Thresholds::Float(cumulative)
            }
        };
        SymbolSampler { thresholds }
    }

    /// Draws one 1-based symbol.
    pub fn draw<R: Rng>(&self, rng: &mut R) -> u32 {
        let idx = match &self.thresholds {
            Thresholds::Exact { cumulative, total } => {
                let u = rng.random_range(0..*total);
                cumulative.partition_point(|&c| c <= u)
            }
            Thresholds::Float(cumulative) => {
                let u: f64 = rng.random();
                cumulative.partition_point(|&c| c <= u).min(cumulative.len() - 1)
            }
        };
        idx as u32 + 1
    }
}

/// Reproducible Bernoulli word, extended on demand.
#[derive(Debug, Clone)]
pub struct SampledWords {
    sampler: SymbolSampler,
    rng: ChaCha20Rng,
    symbols: Vec<u32>,
    seed: u64,
    stream: u64,
}

impl SampledWords {
    pub fn new(system: &SelfSimilarSystem, seed: u64) -> Self {
        Self::for_task(system, seed, 0)
    }

    /// Independent stream for parallel task `task`.
    pub fn for_task(system: &SelfSimilarSystem, seed: u64, task: u64) -> Self {
        let mut rng = ChaCha20Rng::seed_from_u64(seed);
        rng.set_stream(task);
        SampledWords {
            sampler: SymbolSampler::new(system),
            rng,
            symbols: Vec::new(),
            seed,
            stream: task,
        }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn stream(&self) -> u64 {
        self.stream
    }
}

impl WordSource for SampledWords {
    fn prefix(&mut self, len: usize) -> Option<&[u32]> {
        while self.symbols.len() < len {
            let s = self.sampler.draw(&mut self.rng);
            self.symbols.push(s);
        }
        Some(&self.symbols[..len])
    }

    fn describe(&self) -> String {
        format!("bernoulli(seed={}, stream={})", self.seed, self.stream)
    }
}

/// The word `preperiod · period · period · ⋯`.
#[derive(Debug, Clone)]
pub struct PeriodicWord {
    preperiod: Vec<u32>,
    period: Vec<u32>,
    buffer: Vec<u32>,
}

impl PeriodicWord {
    pub fn new(preperiod: Vec<u32>, period: Vec<u32>, maps: usize) -> Result<Self, IfsError> {
        if period.is_empty() {
            return Err(IfsError::Format("period must be non-empty".into()));
        }
        Word::new(preperiod.clone()).check(maps)?;
        Word::new(period.clone()).check(maps)?;
        Ok(PeriodicWord {
            buffer: preperiod.clone(),
            preperiod,
            period,
        })
    }
}

impl WordSource for PeriodicWord {
    fn prefix(&mut self, len: usize) -> Option<&[u32]> {
        while self.buffer.len() < len {
            let k = (self.buffer.len() - self.preperiod.len()) % self.period.len();
            self.buffer.push(self.period[k]);
        }
        Some(&self.buffer[..len])
    }

    fn exact_point(&self, system: &SelfSimilarSystem) -> Option<BigRational> {
        let cycle = system.compose(&Word::new(self.period.clone())).ok()?;
        let fixed = cycle.fixed_point()?;
        let head = system.compose(&Word::new(self.preperiod.clone())).ok()?;
        Some(head.apply(&fixed))
    }

    fn describe(&self) -> String {
        format!("periodic(pre={:?}, period={:?})", self.preperiod, self.period)
    }
}

/// A fixed finite word; refuses to extend past its length.
#[derive(Debug, Clone)]
pub struct FiniteWord(pub Word);

impl WordSource for FiniteWord {
    fn prefix(&mut self, len: usize) -> Option<&[u32]> {
        self.0.symbols().get(..len)
    }

    fn describe(&self) -> String {
        format!("finite(len={})", self.0.len())
    }
}

/// The first `m` symbols of the seeded Bernoulli word for `seed`.
pub fn sample_word(system: &SelfSimilarSystem, m: usize, seed: u64) -> Word {
    let mut src = SampledWords::new(system, seed);
    Word::new(src.prefix(m).expect("sampled words always extend").to_vec())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ifs::presets::cantor;
    use crate::ifs::AffineMap;
    use crate::rational::{int, ratio};

    #[test]
    fn empty_and_reproducible() {
        let sys = cantor();
        assert!(sample_word(&sys, 0, 7).is_empty());
        assert_eq!(sample_word(&sys, 500, 7), sample_word(&sys, 500, 7));
        assert_ne!(sample_word(&sys, 500, 7), sample_word(&sys, 500, 8));
        // Prefixes agree across lengths.
        let long = sample_word(&sys, 1000, 3);
        assert_eq!(&long.symbols()[..10], sample_word(&sys, 10, 3).symbols());
    }

    #[test]
    fn symbol_frequency() {
        let w = sample_word(&cantor(), 1_000_000, 11);
        let ones = w.symbols().iter().filter(|&&s| s == 1).count() as f64;
        assert!((ones / 1e6 - 0.5).abs() < 0.005);
    }

    #[test]
    fn streams_differ() {
        let sys = cantor();
        let mut a = SampledWords::for_task(&sys, 5, 0);
        let mut b = SampledWords::for_task(&sys, 5, 1);
        assert_ne!(a.prefix(64).unwrap(), b.prefix(64).unwrap());
    }

    #[test]
    fn periodic_exact_point() {
        let sys = cantor();
        let w = PeriodicWord::new(vec![], vec![1, 2], 2).unwrap();
        assert_eq!(w.exact_point(&sys), Some(ratio(1, 4)));
        let mut w = PeriodicWord::new(vec![2], vec![1], 2).unwrap();
        assert_eq!(w.exact_point(&sys), Some(ratio(2, 3)));
        assert_eq!(w.prefix(4).unwrap(), &[2, 1, 1, 1]);
    }

    #[test]
    fn uneven_weights() {
        let sys = SelfSimilarSystem::new(
            vec![AffineMap::new(ratio(1, 3), int(0)), AffineMap::new(ratio(1, 3), ratio(2, 3))],
            vec![ratio(1, 5), ratio(4, 5)],
        )
        .unwrap();
        let w = sample_word(&sys, 200_000, 1);
        let ones = w.symbols().iter().filter(|&&s| s == 1).count() as f64 / 2e5;
        assert!((ones - 0.2).abs() < 0.005);
    }
}
