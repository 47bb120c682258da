//! Deciding whether `log|s| / log b` is rational.
//!
//! Instead of factoring into primes, the numerator and denominator of `|s|`
//! and the base `b` are split over a common coprime base (gcd refinement).
//! Exponent vectors over a coprime base are parallel exactly when the prime
//! exponent vectors are, so the decision never depends on factoring hard
//! integers.

use super::AlgebraError;
use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

/// Outcome of a commensurability test `s ∼ b`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CommensurabilityResult {
    pub commensurable: bool,
    /// `log|s| / log b` when it is rational.
    #[serde(serialize_with = "crate::rational::serde_opt::serialize")]
    pub ratio: Option<BigRational>,
}

/// Refines `values` into pairwise coprime factors greater than one such that
/// every input is a product of powers of them.
pub fn coprime_base(values: &[BigUint]) -> Vec<BigUint> {
    let one = BigUint::one();
    let mut base: Vec<BigUint> = values.iter().filter(|v| **v > one).cloned().collect();
    base.sort();
    base.dedup();
    'outer: loop {
        for i in 0..base.len() {
            for j in (i + 1)..base.len() {
                let g = base[i].gcd(&base[j]);
                if g > one {
                    let a = base.swap_remove(j);
                    let b = base.swap_remove(i);
                    for part in [&a / &g, &b / &g, g] {
                        if part > one {
                            base.push(part);
                        }
                    }
                    base.sort();
                    base.dedup();
                    continue 'outer;
                }
            }
        }
        return base;
    }
}

/// Exponents of `x` over a coprime base it factors over completely.
fn exponents(x: &BigUint, base: &[BigUint]) -> Vec<u64> {
    let mut rest = x.clone();
    let exps = base
        .iter()
        .map(|p| {
            let mut e = 0;
            loop {
                let (q, r) = rest.div_rem(p);
                if !r.is_zero() {
                    break;
                }
                rest = q;
                e += 1;
            }
            e
        })
        .collect();
    debug_assert!(rest.is_one(), "input must factor over the coprime base");
    exps
}

/// Decides `s ∼ b`, returning the exact ratio `log|s| / log b` when rational.
pub fn log_commensurable(s: &BigRational, b: u64) -> Result<CommensurabilityResult, AlgebraError> {
    if b < 2 {
        return Err(AlgebraError::InvalidInput(format!("base {b} must be at least 2")));
    }
    let abs = s.abs();
    if abs.is_zero() || abs.is_one() {
        return Err(AlgebraError::InvalidInput(format!(
            "|s| = {} has no finite nonzero logarithm",
            crate::rational::format_rational(&abs)
        )));
    }
    let num = abs.numer().magnitude().clone();
    let den = abs.denom().magnitude().clone();
    let base_n = BigUint::from(b);
    let base = coprime_base(&[num.clone(), den.clone(), base_n.clone()]);
    let en = exponents(&num, &base);
    let ed = exponents(&den, &base);
    let f = exponents(&base_n, &base);
    let e: Vec<i128> = en.iter().zip(&ed).map(|(&a, &b)| a as i128 - b as i128).collect();

    let pivot = f.iter().position(|&x| x != 0).expect("b >= 2 has a factor");
    let ratio = BigRational::new(BigInt::from(e[pivot]), BigInt::from(f[pivot]));
    let parallel = e
        .iter()
        .zip(&f)
        .all(|(&ek, &fk)| BigRational::from_integer(BigInt::from(ek)) == &ratio * BigInt::from(fk));
    if !parallel || ratio.is_zero() {
        return Ok(CommensurabilityResult {
            commensurable: false,
            ratio: None,
        });
    }
    // |s|^q = b^p for ratio = p/q, checked exactly.
    let q = ratio.denom().to_usize().expect("small exponent");
    let p = ratio.numer().to_i64().expect("small exponent");
    let lhs = num_traits::pow(abs, q);
    let bp = num_traits::pow(BigRational::from_integer(BigInt::from(b)), p.unsigned_abs() as usize);
    let rhs = if p < 0 { bp.recip() } else { bp };
    assert_eq!(lhs, rhs, "commensurability certificate failed");
    Ok(CommensurabilityResult {
        commensurable: true,
        ratio: Some(ratio),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::ratio;

    #[test]
    fn ground_truth() {
        let r = log_commensurable(&ratio(1, 3), 3).unwrap();
        assert_eq!(r.ratio, Some(ratio(-1, 1)));
        let r = log_commensurable(&ratio(1, 2), 8).unwrap();
        assert_eq!(r.ratio, Some(ratio(-1, 3)));
        let r = log_commensurable(&ratio(2, 3), 6).unwrap();
        assert!(!r.commensurable && r.ratio.is_none());
    }

    #[test]
    fn more_cases() {
        assert_eq!(log_commensurable(&ratio(-1, 9), 3).unwrap().ratio, Some(ratio(-2, 1)));
        assert_eq!(log_commensurable(&ratio(1, 4), 8).unwrap().ratio, Some(ratio(-2, 3)));
        assert_eq!(log_commensurable(&ratio(4, 9), 6).unwrap().ratio, None);
        assert_eq!(log_commensurable(&ratio(1, 36), 6).unwrap().ratio, Some(ratio(-2, 1)));
        assert_eq!(log_commensurable(&ratio(1, 3), 2).unwrap().ratio, None);
        assert_eq!(log_commensurable(&ratio(1, 3), 9).unwrap().ratio, Some(ratio(-1, 2)));
    }

    #[test]
    fn invalid_inputs() {
        assert!(log_commensurable(&ratio(0, 1), 3).is_err());
        assert!(log_commensurable(&ratio(-1, 1), 3).is_err());
        assert!(log_commensurable(&ratio(1, 2), 1).is_err());
    }

    #[test]
    fn coprime_base_splits_shared_factors() {
        let base = coprime_base(&[BigUint::from(12u32), BigUint::from(18u32)]);
        for i in 0..base.len() {
            for j in (i + 1)..base.len() {
                assert!(base[i].gcd(&base[j]).is_one());
            }
        }
        let mut sorted = base.clone();
        sorted.sort();
        assert_eq!(sorted, vec![BigUint::from(2u32), BigUint::from(3u32)]);
    }
}
