//! Fixed-point interval arithmetic for `β`-transformation orbits and
//! `x^n mod 1`.
//!
//! A ball at precision `p` is a pair of integers `[lo, hi]` read as
//! `[lo / 2^p, hi / 2^p]`. Every operation rounds outward. A run that
//! cannot certify its output restarts at twice the precision.

use super::orbit::SequenceSample;
use super::point::PointApproximation;
use super::SamplingError;
use crate::algebra::RealAlgebraic;
use crate::ifs::Interval;
use crate::rational::{format_rational, to_f64};
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::One;

/// Precision cap for restarts.
pub const MAX_BALL_BITS: u64 = 1 << 22;
/// Certified accuracy of every emitted value.
pub const TARGET_ERROR: f64 = 1.0 / (1u64 << 50) as f64;
// Restarts allowed beyond the first precision that should already suffice.
const EXTRA_DOUBLINGS: u32 = 4;

/// A real parameter `> 0`: an exact rational or an isolated algebraic number.
#[derive(Debug, Clone, PartialEq)]
pub enum RealParam {
    Rational(BigRational),
    Algebraic(RealAlgebraic),
}

impl RealParam {
    fn enclosure(&self, bits: u64) -> Interval {
        match self {
            RealParam::Rational(r) => Interval::new(r.clone(), r.clone()),
            RealParam::Algebraic(a) => a.enclose(bits.min(u32::MAX as u64) as u32),
        }
    }

    pub fn approx(&self) -> f64 {
        let iv = self.enclosure(64);
        to_f64(&iv.midpoint())
    }

    fn describe(&self) -> String {
        match self {
            RealParam::Rational(r) => format_rational(r),
            RealParam::Algebraic(a) => format!("root of {} in {}", a.poly, a.enclosure),
        }
    }
}

#[derive(Debug, Clone)]
struct Ball {
    lo: BigInt,
    hi: BigInt,
}

fn floor_scaled(r: &BigRational, p: u64) -> BigInt {
    (r.numer() << p).div_floor(r.denom())
}

fn ceil_scaled(r: &BigRational, p: u64) -> BigInt {
    -((-r.numer() << p).div_floor(r.denom()))
}

fn ceil_shr(x: &BigInt, p: u64) -> BigInt {
    -((-x) >> p)
}

impl Ball {
    fn from_interval(iv: &Interval, p: u64) -> Ball {
        Ball {
            lo: floor_scaled(&iv.lo, p),
            hi: ceil_scaled(&iv.hi, p),
        }
    }

    fn mul(&self, other: &Ball, p: u64) -> Ball {
        let prods = [
            &self.lo * &other.lo,
            &self.lo * &other.hi,
            &self.hi * &other.lo,
            &self.hi * &other.hi,
        ];
        let min = prods.iter().min().expect("four products");
        let max = prods.iter().max().expect("four products");
        Ball {
            lo: min >> p,
            hi: ceil_shr(max, p),
        }
    }

    /// Integer parts of both endpoints.
    fn floors(&self, p: u64) -> (BigInt, BigInt) {
        (&self.lo >> p, &self.hi >> p)
    }

    fn sub_int(&self, k: &BigInt, p: u64) -> Ball {
        let shifted = k << p;
        Ball {
            lo: &self.lo - &shifted,
            hi: &self.hi - &shifted,
        }
    }

    /// Midpoint as `f64` and a bound on its distance to every point of the ball.
    fn to_f64(&self, p: u64) -> (f64, f64) {
        let sum = &self.lo + &self.hi;
        let mid = to_f64(&BigRational::new(sum, BigInt::one() << (p + 1)));
        let width = to_f64(&BigRational::new(&self.hi - &self.lo, BigInt::one() << (p + 1)));
        // One rounding in the midpoint plus one in the width.
        (mid, width * (1.0 + f64::EPSILON) + f64::EPSILON * mid.abs())
    }
}

enum Run {
    Done(Vec<f64>, Vec<f64>),
    NeedsPrecision,
    Straddle(usize, Vec<f64>, Vec<f64>),
}

fn clamp_unit(v: f64) -> f64 {
    v.clamp(0.0, crate::rational::ONE_MINUS_ULP)
}

/// `T_β^n(x)` for `n = 1 … count`.
pub fn beta_orbit(x: &PointApproximation, beta: &RealParam, count: usize) -> Result<SequenceSample, SamplingError> {
    let b = beta.enclosure(64);
    if b.lo <= BigRational::one() {
        return Err(SamplingError::InvalidInput(format!("beta {} must exceed 1", beta.describe())));
    }
    let growth = to_f64(&b.hi).log2();
    let start_iv = x.interval();
    // The input radius alone grows like β^n; no precision can fix that.
    let radius = to_f64(&x.radius);
    if radius > 0.0 && radius.log2() + growth * count as f64 > -51.0 {
        return Err(SamplingError::PrecisionExhausted(format!(
            "input enclosure radius {radius:e} is too wide for {count} steps of beta {}",
            beta.describe()
        )));
    }
    let mut bits = 64 + 52 + (growth * count as f64).ceil() as u64;
    let mut doublings = 0;
    loop {
        let beta_ball = Ball::from_interval(&beta.enclosure(bits + 8), bits);
        let mut ball = Ball::from_interval(&start_iv, bits);
        let mut values = Vec::with_capacity(count);
        let mut errors = Vec::with_capacity(count);
        let run = 'run: {
            for n in 0..count {
                let y = beta_ball.mul(&ball, bits);
                let (k_lo, k_hi) = y.floors(bits);
                if k_lo != k_hi {
                    break 'run Run::Straddle(n, values, errors);
                }
                ball = y.sub_int(&k_lo, bits);
                let (v, e) = ball.to_f64(bits);
                if e > TARGET_ERROR {
                    break 'run Run::NeedsPrecision;
                }
                values.push(clamp_unit(v));
                errors.push(e);
            }
            Run::Done(values, errors)
        };
        let source = format!("beta orbit, beta = {}", beta.describe());
        match run {
            Run::Done(values, errors) => {
                return Ok(SequenceSample {
                    values,
                    errors,
                    start: 1,
                    source,
                    seed: None,
                    rng: None,
                })
            }
            Run::Straddle(n, values, errors) if doublings >= EXTRA_DOUBLINGS || bits * 2 > MAX_BALL_BITS => {
                return Err(SamplingError::BallStraddlesCut {
                    index: n as u64 + 1,
                    partial: Box::new(SequenceSample {
                        values,
                        errors,
                        start: 1,
                        source,
                        seed: None,
                        rng: None,
                    }),
                });
            }
            _ if bits * 2 > MAX_BALL_BITS => {
                return Err(SamplingError::PrecisionExhausted(format!("beta orbit needs more than {MAX_BALL_BITS} bits")));
            }
            _ => {
                bits *= 2;
                doublings += 1;
            }
        }
    }
}

/// `x^n mod 1` for `n = 1 … count`.
pub fn power_orbit(x: &RealParam, count: usize) -> Result<SequenceSample, SamplingError> {
    let xe = x.enclosure(64);
    if xe.lo <= BigRational::one() {
        return Err(SamplingError::InvalidInput(format!("x = {} must exceed 1", x.describe())));
    }
    let growth = to_f64(&xe.hi).log2();
    let log_n = (count.max(2) as f64).log2().ceil() as u64;
    let mut bits = 64 + 52 + 2 * log_n + (growth * count as f64).ceil() as u64;
    let source = format!("powers mod 1 of {}", x.describe());
    loop {
        let base = Ball::from_interval(&x.enclosure(bits + 8), bits);
        let mut power = base.clone();
        let mut values = Vec::with_capacity(count);
        let mut errors = Vec::with_capacity(count);
        let mut ok = true;
        for n in 1..=count {
            if n > 1 {
                power = power.mul(&base, bits);
            }
            let (k_lo, k_hi) = power.floors(bits);
            if k_lo != k_hi {
                ok = false;
                break;
            }
            let (v, e) = power.sub_int(&k_lo, bits).to_f64(bits);
            if e > TARGET_ERROR {
                ok = false;
                break;
            }
            values.push(clamp_unit(v));
            errors.push(e);
        }
        if ok {
            return Ok(SequenceSample {
                values,
                errors,
                start: 1,
                source,
                seed: None,
                rng: None,
            });
        }
        if bits * 2 > MAX_BALL_BITS {
            return Err(SamplingError::PrecisionExhausted(format!(
                "powers of {} need more than {MAX_BALL_BITS} bits",
                x.describe()
            )));
        }
        bits *= 2;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::IntPoly;
    use crate::ifs::{AffineMap, SelfSimilarSystem};
    use crate::rational::{int, ratio};
    use crate::sampling::digits::digits;
    use crate::sampling::words::SampledWords;

    fn golden() -> RealParam {
        let poly = IntPoly::from_descending(&[1, -1, -1]);
        RealParam::Algebraic(RealAlgebraic::new(poly, Interval::new(int(1), int(2))).unwrap())
    }

    #[test]
    fn golden_beta_from_one() {
        let x = PointApproximation::exact(int(1), crate::ifs::Word::empty());
        let o = beta_orbit(&x, &golden(), 1).unwrap();
        assert!((o.values[0] - 0.618_033_988_749_894_8).abs() < 1e-15);
        assert!(o.max_error() <= TARGET_ERROR);
        // β · (β − 1) = 1 exactly, so the second step lands on a cut.
        match beta_orbit(&x, &golden(), 5) {
            Err(SamplingError::BallStraddlesCut { index, partial }) => {
                assert_eq!(index, 2);
                assert_eq!(partial.len(), 1);
            }
            other => panic!("expected a straddle, got {other:?}"),
        }
    }

    #[test]
    fn zero_stays_zero() {
        let x = PointApproximation::exact(int(0), crate::ifs::Word::empty());
        let o = beta_orbit(&x, &RealParam::Rational(ratio(5, 2)), 50).unwrap();
        assert!(o.values.iter().all(|&v| v == 0.0));
    }

    #[test]
    fn exact_cut_is_flagged() {
        // (5/2)·(2/5) = 1 exactly, which sits on a discontinuity.
        let x = PointApproximation::exact(ratio(2, 5), crate::ifs::Word::empty());
        match beta_orbit(&x, &RealParam::Rational(ratio(5, 2)), 10) {
            Err(SamplingError::BallStraddlesCut { index, partial }) => {
                assert_eq!(index, 1);
                assert!(partial.is_empty());
            }
            other => panic!("expected a straddle, got {other:?}"),
        }
    }

    #[test]
    fn k_beta_is_invariant() {
        let beta = ratio(5, 2);
        let sys = SelfSimilarSystem::uniform(vec![
            AffineMap::new(ratio(2, 5), int(0)),
            AffineMap::new(ratio(2, 5), ratio(2, 5)),
        ])
        .unwrap();
        assert_eq!(sys.hull().hi, ratio(2, 3));
        for seed in 0..5 {
            let mut src = SampledWords::new(&sys, seed);
            // 200 steps at growth 5/2 need about 265 base-2 digits of accuracy.
            let d = digits(&sys, &mut src, 2, 340, 16).unwrap();
            let o = beta_orbit(&d.source, &RealParam::Rational(beta.clone()), 200).unwrap();
            assert!(o.values.iter().all(|&v| v <= 2.0 / 3.0 + 1e-12));
        }
    }

    #[test]
    fn powers_of_three_halves() {
        let o = power_orbit(&RealParam::Rational(ratio(3, 2)), 1000).unwrap();
        assert_eq!(o.values[1], 0.25);
        assert!(o.max_error() <= TARGET_ERROR);
        let o = power_orbit(&RealParam::Rational(int(2)), 100).unwrap();
        assert!(o.values.iter().all(|&v| v == 0.0));
    }

    #[test]
    fn powers_of_golden_ratio_tend_to_integers() {
        // φ^n + (−1/φ)^n is an integer, so φ^n mod 1 approaches 0 or 1.
        let o = power_orbit(&golden(), 60).unwrap();
        let last = o.values[59];
        assert!(last < 1e-10 || last > 1.0 - 1e-10);
    }
}
