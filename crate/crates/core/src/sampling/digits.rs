//! Certified base-`b` digits of coded points.
//!
//! Digits are those of `x mod 1`. When a point is exactly `k / b^j` the
//! terminating expansion is used, so `1/2` in base 2 is `1, 0, 0, …`.

use super::point::{approximation_from_prefix, PointApproximation};
use super::words::WordSource;
use super::SamplingError;
use crate::ifs::{ComposedPrefix, SelfSimilarSystem, Word};
use crate::rational::{floor, frac, to_f64};
use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

pub const DEFAULT_GUARD: usize = 16;

/// How many times the word depth may double after the initial estimate.
const MAX_DOUBLINGS: u32 = 3;

#[derive(Debug, Clone, PartialEq)]
pub struct DigitStream {
    pub base: u32,
    pub digits: Vec<u32>,
    pub certified_length: usize,
    /// The enclosure that certified the digits; radius zero when the exact
    /// point was used.
    pub source: PointApproximation,
}

impl DigitStream {
    /// Word depth consumed to certify the digits.
    pub fn depth(&self) -> usize {
        self.source.word.len()
    }
}

/// Initial word depth `⌈((n + g) log b + log(2W)) / log(1/ρ)⌉`.
pub fn initial_depth(system: &SelfSimilarSystem, base: u32, n: usize, guard: usize) -> usize {
    let rho = to_f64(&system.contraction());
    let width = to_f64(&system.hull().width()).max(0.5);
    let need = (n + guard) as f64 * (base as f64).ln() + (2.0 * width).ln();
    (need / -rho.ln()).ceil().max(1.0) as usize
}

/// Certifies the first `n` base-`base` digits of the point coded by `source`,
/// using the hull midpoint as base point.
pub fn digits(
    system: &SelfSimilarSystem,
    source: &mut dyn WordSource,
    base: u32,
    n: usize,
    guard: usize,
) -> Result<DigitStream, SamplingError> {
    if base < 2 {
        return Err(SamplingError::InvalidInput(format!("base {base} must be at least 2")));
    }
    let x0 = system.hull().midpoint();
    let (u, v) = (x0.numer().clone(), x0.denom().clone());
    let w = system.hull().width();
    let (wn, wd) = (w.numer().clone(), w.denom().clone());
    let b_pow_n = BigInt::from(base).pow(n as u32);

    let mut depth = initial_depth(system, base, n, guard);
    let mut prefix = ComposedPrefix::new(system);
    for attempt in 0..=MAX_DOUBLINGS {
        let Some(symbols) = source.prefix(depth) else {
            break;
        };
        for &s in &symbols[prefix.depth()..] {
            if s == 0 || s as usize > system.len() {
                return Err(SamplingError::System(crate::ifs::IfsError::SymbolOutOfRange {
                    symbol: s,
                    maps: system.len(),
                }));
            }
            prefix.push(s);
        }
        // Everything over the common denominator L = D^m · v · wd.
        let (p, q, dm) = prefix.raw();
        let center = (p * &u + q * &v) * &wd;
        let radius = p.abs() * &wn * &v;
        let denom = dm * &v * &wd;
        let lo = ((&center - &radius) * &b_pow_n).div_floor(&denom);
        let hi = ((&center + &radius) * &b_pow_n).div_floor(&denom);
        if lo == hi {
            let word = Word::new(symbols.to_vec());
            let approx = approximation_from_prefix(system, &prefix, word, &x0)?;
            return Ok(stream_from_cell(base, n, &lo, &b_pow_n, approx));
        }
        if source.exact_point(system).is_some() {
            // A periodic word that keeps straddling a cell boundary is almost
            // always exactly on it; skip straight to exact arithmetic.
            break;
        }
        if attempt < MAX_DOUBLINGS {
            depth *= 2;
        }
    }
    if let Some(x) = source.exact_point(system) {
        let word = Word::new(source.prefix(prefix.depth()).unwrap_or(&[]).to_vec());
        return Ok(exact_digits(&x, base, n, word));
    }
    Err(SamplingError::PrecisionExhausted(format!(
        "{} digits in base {base}: enclosure still straddles a cell boundary at depth {}",
        n,
        prefix.depth()
    )))
}

/// Digits of an exact rational (terminating convention).
pub fn exact_digits(x: &BigRational, base: u32, n: usize, word: Word) -> DigitStream {
    let b_pow_n = BigInt::from(base).pow(n as u32);
    let cell = floor(&(frac(x) * BigRational::from_integer(b_pow_n.clone())));
    stream_from_cell(base, n, &cell, &b_pow_n, PointApproximation::exact(x.clone(), word))
}

fn stream_from_cell(base: u32, n: usize, cell: &BigInt, b_pow_n: &BigInt, source: PointApproximation) -> DigitStream {
    let k = cell.mod_floor(b_pow_n);
    let k = k.to_biguint().expect("non-negative after mod_floor");
    DigitStream {
        base,
        digits: radix_digits(&k, base, n),
        certified_length: n,
        source,
    }
}

/// The `n` least significant base-`b` digits of `k`, most significant first.
pub fn radix_digits(k: &BigUint, base: u32, n: usize) -> Vec<u32> {
    let mut out = vec![0u32; n];
    if base <= 256 {
        let raw = k.to_radix_le(base);
        for (i, d) in raw.iter().take(n).enumerate() {
            out[n - 1 - i] = *d as u32;
        }
    } else {
        fill_digits(k, base, &mut out);
    }
    out
}

// Divide and conquer: split off the low half with one division by b^half.
fn fill_digits(k: &BigUint, base: u32, out: &mut [u32]) {
    let n = out.len();
    if n <= 16 {
        let mut k = k.clone();
        let b = BigUint::from(base);
        for slot in out.iter_mut().rev() {
            let (q, r) = k.div_rem(&b);
            *slot = r.to_u32().expect("digit below base");
            k = q;
        }
        return;
    }
    let half = n / 2;
    let (high, low) = k.div_rem(&BigUint::from(base).pow(half as u32));
    let (left, right) = out.split_at_mut(n - half);
    fill_digits(&high, base, left);
    fill_digits(&low, base, right);
}

/// Reads digits back as `0.d_1 d_2 … d_n` in base `b`.
pub fn digits_value(digits: &[u32], base: u32) -> BigRational {
    let mut num = BigInt::zero();
    for &d in digits {
        num = num * base + d;
    }
    let den = BigInt::from(base).pow(digits.len() as u32);
    BigRational::new(num, den)
}
