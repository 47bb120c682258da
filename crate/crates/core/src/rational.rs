//! Exact rational helpers shared by every module.
//!
//! All system parameters are [`BigRational`] values in lowest terms. On disk
//! they are encoded as strings: `"n"` for integers and `"n/d"` otherwise,
//! which makes the canonical encoding of a value unique.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::fmt;

/// Error raised when a rational string cannot be parsed.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("malformed rational {input:?}: {reason}")]
pub struct ParseRationalError {
    pub input: String,
    pub reason: &'static str,
}

/// Parses `"n"`, `"n/d"` or `"-n/d"`. The result is reduced to lowest terms.
pub fn parse_rational(s: &str) -> Result<BigRational, ParseRationalError> {
    let err = |reason| ParseRationalError {
        input: s.to_string(),
        reason,
    };
    let trimmed = s.trim();
    if trimmed.is_empty() {
        return Err(err("empty string"));
    }
    let (num, den) = match trimmed.split_once('/') {
        Some((n, d)) => (n.trim(), Some(d.trim())),
        None => (trimmed, None),
    };
    let num: BigInt = num.parse().map_err(|_| err("numerator is not an integer"))?;
    let den: BigInt = match den {
        Some(d) => {
            if d.starts_with('-') || d.starts_with('+') {
                return Err(err("denominator must be an unsigned integer"));
            }
            d.parse().map_err(|_| err("denominator is not an integer"))?
        }
        None => BigInt::one(),
    };
    if den.is_zero() {
        return Err(err("zero denominator"));
    }
    Ok(BigRational::new(num, den))
}

/// Canonical string form: `"n"` when the denominator is one, else `"n/d"`.
pub fn format_rational(r: &BigRational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Display adapter for canonical formatting inside `format!`.
pub struct Canonical<'a>(pub &'a BigRational);

impl fmt::Display for Canonical<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format_rational(self.0))
    }
}

pub fn int(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

pub fn ratio(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// Largest integer not exceeding `r`.
pub fn floor(r: &BigRational) -> BigInt {
    r.numer().div_floor(r.denom())
}

/// `r - floor(r)`, always in `[0, 1)`.
pub fn frac(r: &BigRational) -> BigRational {
    let fl = floor(r);
    r - BigRational::from_integer(fl)
}

/// Nearest `f64` to `r`, robust for numerators and denominators far beyond
/// the `f64` exponent range.
pub fn to_f64(r: &BigRational) -> f64 {
    if let Some(v) = r.to_f64() {
        if v.is_finite() && (v != 0.0 || r.is_zero()) {
            return v;
        }
    }
    // Scale both parts down to 64 significant bits before dividing.
    let sign = if r.is_negative() { -1.0 } else { 1.0 };
    let num = r.numer().magnitude();
    let den = r.denom().magnitude();
    let shift_n = num.bits().saturating_sub(64);
    let shift_d = den.bits().saturating_sub(64);
    let n = (num >> shift_n).to_f64().unwrap_or(0.0);
    let d = (den >> shift_d).to_f64().unwrap_or(1.0);
    sign * (n / d) * 2f64.powi(shift_n as i32 - shift_d as i32)
}

/// Fractional part of `r` as a 128-bit fixed-point number, `floor(frac(r) * 2^128)`.
///
/// Multiplying this by an integer `q` with wrapping arithmetic gives
/// `frac(q * r)` to within `|q| * 2^-128`.
pub fn frac_fixed128(r: &BigRational) -> u128 {
    let f = frac(r);
    let scaled: BigInt = (f.numer() << 128u32).div_floor(f.denom());
    let (_, digits) = scaled.to_u64_digits();
    let lo = digits.first().copied().unwrap_or(0) as u128;
    let hi = digits.get(1).copied().unwrap_or(0) as u128;
    lo | (hi << 64)
}

/// Converts a 128-bit fixed-point fraction to `f64` in `[0, 1)`.
pub fn fixed128_to_f64(x: u128) -> f64 {
    let v = (x >> 64) as f64 / 18446744073709551616.0 + (x as u64) as f64 / 3.402_823_669_209_385e38;
    if v >= 1.0 {
        ONE_MINUS_ULP
    } else {
        v
    }
}

/// Largest `f64` strictly below one.
pub const ONE_MINUS_ULP: f64 = 1.0 - f64::EPSILON / 2.0;

/// `(cos 2πφ, sin 2πφ)` for a phase `φ` given modulo one.
pub fn unit_phase(phi: f64) -> (f64, f64) {
    // Reduce to [-1/2, 1/2] so the argument passed to sin/cos is at most π.
    let reduced = phi - phi.round();
    let (s, c) = (2.0 * std::f64::consts::PI * reduced).sin_cos();
    (c, s)
}

/// `e^{2πi r}` computed from the exact fractional part of `r`.
pub fn exp_2pi_i(r: &BigRational) -> (f64, f64) {
    unit_phase(to_f64(&frac(r)))
}

/// `serde` adapter storing a single rational as its canonical string.
pub mod serde_str {
    use super::{format_rational, parse_rational};
    use num_rational::BigRational;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(r: &BigRational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&format_rational(r))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigRational, D::Error> {
        let raw = String::deserialize(d)?;
        parse_rational(&raw).map_err(serde::de::Error::custom)
    }
}

/// `serde` adapter for a list of rationals.
pub mod serde_vec {
    use super::{format_rational, parse_rational};
    use num_rational::BigRational;
    use serde::ser::SerializeSeq;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &[BigRational], s: S) -> Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(v.len()))?;
        for r in v {
            seq.serialize_element(&format_rational(r))?;
        }
        seq.end()
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<BigRational>, D::Error> {
        let raw = Vec::<String>::deserialize(d)?;
        raw.iter()
            .map(|s| parse_rational(s).map_err(serde::de::Error::custom))
            .collect()
    }
}

/// `serde` serializer for an optional rational (`null` when absent).
pub mod serde_opt {
    use super::format_rational;
    use num_rational::BigRational;
    use serde::Serializer;

    pub fn serialize<S: Serializer>(r: &Option<BigRational>, s: S) -> Result<S::Ok, S::Error> {
        match r {
            Some(r) => s.serialize_str(&format_rational(r)),
            None => s.serialize_none(),
        }
    }
}
