//! Checks whether a (conjugated) system has the digit-restriction form that
//! is the only obstruction to pointwise absolute normality: every slope
//! commensurable with a common integer base `b`, and every translation of
//! the form `k / b^q`.

use super::commensurability::{log_commensurable, CommensurabilityResult};
use super::AlgebraError;
use crate::ifs::{self, AffineMap, SelfSimilarSystem};
use crate::rational::format_rational;
use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::One;
use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Verdict {
    MatchesObstructionForm,
    FailsItem1,
    FailsItem2,
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            Verdict::MatchesObstructionForm => "MatchesObstructionForm",
            Verdict::FailsItem1 => "FailsItem1",
            Verdict::FailsItem2 => "FailsItem2",
        };
        f.write_str(s)
    }
}

/// Whether a translation can be written `k / b^exponent`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TranslationForm {
    pub passes: bool,
    #[serde(serialize_with = "serialize_opt_int")]
    pub numerator: Option<BigInt>,
    /// Smallest admissible exponent.
    pub exponent: Option<u64>,
}

fn serialize_opt_int<S: serde::Serializer>(v: &Option<BigInt>, s: S) -> Result<S::Ok, S::Error> {
    match v {
        Some(k) => s.serialize_str(&k.to_string()),
        None => s.serialize_none(),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MapCheck {
    /// 1-based map index.
    pub index: usize,
    #[serde(serialize_with = "crate::rational::serde_str::serialize")]
    pub slope: BigRational,
    #[serde(serialize_with = "crate::rational::serde_str::serialize")]
    pub translation: BigRational,
    pub slope_check: CommensurabilityResult,
    pub translation_check: TranslationForm,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ObstructionReport {
    pub base: u64,
    /// The conjugating map `g`, as `[slope, offset]`.
    #[serde(serialize_with = "serialize_map")]
    pub conjugacy: AffineMap,
    pub maps: Vec<MapCheck>,
    pub verdict: Verdict,
}

fn serialize_map<S: serde::Serializer>(m: &AffineMap, s: S) -> Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut seq = s.serialize_seq(Some(2))?;
    seq.serialize_element(&format_rational(&m.slope))?;
    seq.serialize_element(&format_rational(&m.offset))?;
    seq.end()
}

/// Tests `t = k / b^j` for integers `k` and `j ≥ 0`: true iff every prime
/// dividing the reduced denominator of `t` divides `b`.
pub fn translation_form(t: &BigRational, b: u64) -> TranslationForm {
    let base = BigUint::from(b);
    let den = t.denom().magnitude().clone();
    let mut rest = den.clone();
    loop {
        let g = rest.gcd(&base);
        if g.is_one() {
            break;
        }
        rest /= g;
    }
    if !rest.is_one() {
        return TranslationForm {
            passes: false,
            numerator: None,
            exponent: None,
        };
    }
    let mut exponent = 0u64;
    let mut power = BigUint::one();
    while !(&power % &den == BigUint::from(0u32)) {
        power *= &base;
        exponent += 1;
    }
    let k = (t * BigRational::from_integer(BigInt::from(power))).to_integer();
    TranslationForm {
        passes: true,
        numerator: Some(k),
        exponent: Some(exponent),
    }
}

/// Classifies the hull-normalized system against base `b`.
pub fn classify_obstruction(system: &SelfSimilarSystem, b: u64) -> Result<ObstructionReport, AlgebraError> {
    let (_, g) = ifs::normalize(system)?;
    classify_obstruction_with(system, b, &g)
}

/// Classifies `{g⁻¹ ∘ f_i ∘ g}` for a caller-supplied conjugating map `g`.
pub fn classify_obstruction_with(
    system: &SelfSimilarSystem,
    b: u64,
    g: &AffineMap,
) -> Result<ObstructionReport, AlgebraError> {
    if b < 2 {
        return Err(AlgebraError::InvalidInput(format!("base {b} must be at least 2")));
    }
    let conjugated = ifs::conjugate(system, g)?;
    let mut maps = Vec::with_capacity(conjugated.len());
    for (i, m) in conjugated.maps().iter().enumerate() {
        maps.push(MapCheck {
            index: i + 1,
            slope: m.slope.clone(),
            translation: m.offset.clone(),
            slope_check: log_commensurable(&m.slope, b)?,
            translation_check: translation_form(&m.offset, b),
        });
    }
    let verdict = if maps.iter().any(|m| !m.slope_check.commensurable) {
        Verdict::FailsItem1
    } else if maps.iter().any(|m| !m.translation_check.passes) {
        Verdict::FailsItem2
    } else {
        Verdict::MatchesObstructionForm
    };
    Ok(ObstructionReport {
        base: b,
        conjugacy: g.clone(),
        maps,
        verdict,
    })
}

/// Index (1-based) of the first map whose slope is incommensurable with
/// `b`. Such a map forces pointwise `b`-normality of every self-similar
/// measure of the system.
pub fn incommensurable_witness(system: &SelfSimilarSystem, b: u64) -> Result<Option<usize>, AlgebraError> {
    for (i, m) in system.maps().iter().enumerate() {
        if !log_commensurable(&m.slope, b)?.commensurable {
            return Ok(Some(i + 1));
        }
    }
    Ok(None)
}
