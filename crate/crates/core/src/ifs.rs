//! Exact self-similar iterated function systems on the line.
//!
//! A system is a list of contracting affine maps `f_i(x) = s_i x + t_i` with
//! rational parameters, a strictly positive rational probability vector, and
//! the convex hull of its attractor. Everything here is exact.

use crate::rational::{self, format_rational, Canonical};
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use std::fmt;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum IfsError {
    #[error("a system needs at least two maps, got {0}")]
    TooFewMaps(usize),
    #[error("{maps} maps but {weights} weights")]
    WeightCountMismatch { maps: usize, weights: usize },
    #[error("weight {index} is not strictly positive: {value}")]
    NonPositiveWeight { index: usize, value: String },
    #[error("weights sum to {sum}, not 1")]
    WeightSumError { sum: String },
    #[error("map {index} has slope {slope}, which is not in (-1, 1) \\ {{0}}")]
    NonContractingMap { index: usize, slope: String },
    #[error("map {index} sends the hull outside itself")]
    HullNotInvariant { index: usize },
    #[error("all maps share the fixed point {0}; the attractor is a single point")]
    DegenerateFixedPoints(String),
    #[error("symbol {symbol} is out of range for a system with {maps} maps")]
    SymbolOutOfRange { symbol: u32, maps: usize },
    #[error("hull iteration did not converge within {0} steps")]
    NonConvergence(usize),
    #[error("hull is a single point")]
    DegenerateHull,
    #[error("base point {0} lies outside the hull")]
    BasePointOutsideHull(String),
    #[error("system file: {0}")]
    Format(String),
}

/// `x ↦ slope·x + offset`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct AffineMap {
    pub slope: BigRational,
    pub offset: BigRational,
}

impl AffineMap {
    pub fn new(slope: BigRational, offset: BigRational) -> Self {
        AffineMap { slope, offset }
    }

    pub fn identity() -> Self {
        AffineMap::new(BigRational::one(), BigRational::zero())
    }

    pub fn apply(&self, x: &BigRational) -> BigRational {
        &self.slope * x + &self.offset
    }

    /// `self ∘ inner`.
    pub fn compose(&self, inner: &AffineMap) -> AffineMap {
        AffineMap {
            slope: &self.slope * &inner.slope,
            offset: &self.slope * &inner.offset + &self.offset,
        }
    }

    pub fn inverse(&self) -> Option<AffineMap> {
        if self.slope.is_zero() {
            return None;
        }
        let inv = self.slope.recip();
        let offset = -(&self.offset * &inv);
        Some(AffineMap::new(inv, offset))
    }

    /// Solution of `f(x) = x`; `None` when the slope is one.
    pub fn fixed_point(&self) -> Option<BigRational> {
        let denom = BigRational::one() - &self.slope;
        if denom.is_zero() {
            None
        } else {
            Some(&self.offset / denom)
        }
    }

    pub fn is_contracting(&self) -> bool {
        !self.slope.is_zero() && self.slope.abs() < BigRational::one()
    }

    /// Image of an interval, handling orientation reversal.
    pub fn image(&self, iv: &Interval) -> Interval {
        let a = self.apply(&iv.lo);
        let b = self.apply(&iv.hi);
        if a <= b {
            Interval::new(a, b)
        } else {
            Interval::new(b, a)
        }
    }
}

impl fmt::Display for AffineMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "x ↦ {}·x + {}", Canonical(&self.slope), Canonical(&self.offset))
    }
}

/// Closed rational interval `[lo, hi]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Interval {
    pub lo: BigRational,
    pub hi: BigRational,
}

impl Interval {
    pub fn new(lo: BigRational, hi: BigRational) -> Self {
        debug_assert!(lo <= hi);
        Interval { lo, hi }
    }

    pub fn unit() -> Self {
        Interval::new(BigRational::zero(), BigRational::one())
    }

    pub fn width(&self) -> BigRational {
        &self.hi - &self.lo
    }

    pub fn midpoint(&self) -> BigRational {
        (&self.lo + &self.hi) / rational::int(2)
    }

    pub fn contains(&self, x: &BigRational) -> bool {
        &self.lo <= x && x <= &self.hi
    }

    pub fn contains_interval(&self, other: &Interval) -> bool {
        self.lo <= other.lo && other.hi <= self.hi
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", Canonical(&self.lo), Canonical(&self.hi))
    }
}

/// A finite word over the alphabet `{1, …, n}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Word(Vec<u32>);

impl Word {
    pub fn new(symbols: Vec<u32>) -> Self {
        Word(symbols)
    }

    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn symbols(&self) -> &[u32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        Word(v)
    }

    pub fn check(&self, maps: usize) -> Result<(), IfsError> {
        match self.0.iter().find(|&&s| s == 0 || s as usize > maps) {
            Some(&symbol) => Err(IfsError::SymbolOutOfRange { symbol, maps }),
            None => Ok(()),
        }
    }
}

impl From<Vec<u32>> for Word {
    fn from(v: Vec<u32>) -> Self {
        Word(v)
    }
}

/// Integer form of a system: every map is `x ↦ (A_i x + C_i) / D`.
///
/// Composing words in this form needs no gcd reductions, which keeps deep
/// prefixes linear in their bit size.
#[derive(Debug, Clone, PartialEq)]
pub struct IntegerForm {
    pub denom: BigInt,
    pub slopes: Vec<BigInt>,
    pub offsets: Vec<BigInt>,
}

impl IntegerForm {
    fn new(maps: &[AffineMap]) -> Self {
        let mut denom = BigInt::one();
        for m in maps {
            denom = denom.lcm(m.slope.denom());
            denom = denom.lcm(m.offset.denom());
        }
        let scale = |r: &BigRational| (r * BigRational::from_integer(denom.clone())).to_integer();
        IntegerForm {
            slopes: maps.iter().map(|m| scale(&m.slope)).collect(),
            offsets: maps.iter().map(|m| scale(&m.offset)).collect(),
            denom,
        }
    }
}

/// Incrementally composed prefix `f_{ω_1} ∘ ⋯ ∘ f_{ω_m}` stored as
/// `x ↦ (P x + Q) / D^m`.
#[derive(Debug, Clone)]
pub struct ComposedPrefix<'a> {
    form: &'a IntegerForm,
    depth: usize,
    slope_num: BigInt,
    offset_num: BigInt,
    den: BigInt,
}

impl<'a> ComposedPrefix<'a> {
    pub fn new(system: &'a SelfSimilarSystem) -> Self {
        ComposedPrefix {
            form: &system.integer,
            depth: 0,
            slope_num: BigInt::one(),
            offset_num: BigInt::zero(),
            den: BigInt::one(),
        }
    }

    /// Appends symbol `symbol` (1-based) on the right.
    pub fn push(&mut self, symbol: u32) {
        let i = symbol as usize - 1;
        let d = &self.form.denom;
        self.offset_num = &self.slope_num * &self.form.offsets[i] + &self.offset_num * d;
        self.slope_num *= &self.form.slopes[i];
        self.den *= d;
        self.depth += 1;
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    /// Unreduced `(P, Q, D^m)`.
    pub fn raw(&self) -> (&BigInt, &BigInt, &BigInt) {
        (&self.slope_num, &self.offset_num, &self.den)
    }

    pub fn slope(&self) -> BigRational {
        BigRational::new(self.slope_num.clone(), self.den.clone())
    }

    pub fn offset(&self) -> BigRational {
        BigRational::new(self.offset_num.clone(), self.den.clone())
    }

    pub fn to_map(&self) -> AffineMap {
        AffineMap::new(self.slope(), self.offset())
    }
}

/// A validated self-similar system with its exact attractor hull.
#[derive(Debug, Clone, PartialEq)]
pub struct SelfSimilarSystem {
    maps: Vec<AffineMap>,
    weights: Vec<BigRational>,
    hull: Interval,
    integer: IntegerForm,
}

impl SelfSimilarSystem {
    /// Validates `maps` and `weights` and computes the hull.
    pub fn new(maps: Vec<AffineMap>, weights: Vec<BigRational>) -> Result<Self, IfsError> {
        Self::with_hull(maps, weights, None)
    }

    /// As [`SelfSimilarSystem::new`], additionally checking that a supplied
    /// interval is mapped into itself by every map.
    pub fn with_hull(
        maps: Vec<AffineMap>,
        weights: Vec<BigRational>,
        supplied: Option<Interval>,
    ) -> Result<Self, IfsError> {
        if maps.len() < 2 {
            return Err(IfsError::TooFewMaps(maps.len()));
        }
        if maps.len() != weights.len() {
            return Err(IfsError::WeightCountMismatch {
                maps: maps.len(),
                weights: weights.len(),
            });
        }
        for (index, w) in weights.iter().enumerate() {
            if !w.is_positive() {
                return Err(IfsError::NonPositiveWeight {
                    index: index + 1,
                    value: format_rational(w),
                });
            }
        }
        let sum: BigRational = weights.iter().sum();
        if !sum.is_one() {
            return Err(IfsError::WeightSumError {
                sum: format_rational(&sum),
            });
        }
        for (index, m) in maps.iter().enumerate() {
            if !m.is_contracting() {
                return Err(IfsError::NonContractingMap {
                    index: index + 1,
                    slope: format_rational(&m.slope),
                });
            }
        }
        let fixed: Vec<BigRational> = maps.iter().map(|m| m.fixed_point().expect("contracting")).collect();
        if fixed.iter().all(|x| x == &fixed[0]) {
            return Err(IfsError::DegenerateFixedPoints(format_rational(&fixed[0])));
        }
        if let Some(j) = &supplied {
            if let Some(index) = maps.iter().position(|m| !j.contains_interval(&m.image(j))) {
                return Err(IfsError::HullNotInvariant { index: index + 1 });
            }
        }
        let hull = attractor_hull(&maps)?;
        let integer = IntegerForm::new(&maps);
        Ok(SelfSimilarSystem {
            maps,
            weights,
            hull,
            integer,
        })
    }

    pub fn from_spec(spec: &SystemSpec) -> Result<Self, IfsError> {
        let maps = spec
            .maps
            .iter()
            .map(|m| AffineMap::new(m.s.clone(), m.t.clone()))
            .collect();
        let hull = match &spec.hull {
            Some(h) if h.len() == 2 => {
                if h[0] > h[1] {
                    return Err(IfsError::Format("hull endpoints out of order".into()));
                }
                Some(Interval::new(h[0].clone(), h[1].clone()))
            }
            Some(_) => return Err(IfsError::Format("hull must have two endpoints".into())),
            None => None,
        };
        Self::with_hull(maps, spec.weights.clone(), hull)
    }

    pub fn to_spec(&self) -> SystemSpec {
        SystemSpec {
            maps: self
                .maps
                .iter()
                .map(|m| MapSpec {
                    s: m.slope.clone(),
                    t: m.offset.clone(),
                })
                .collect(),
            weights: self.weights.clone(),
            hull: Some(vec![self.hull.lo.clone(), self.hull.hi.clone()]),
        }
    }

    pub fn from_json(text: &str) -> Result<Self, IfsError> {
        Self::from_spec(&SystemSpec::from_json(text)?)
    }

    /// Uniform weights over the given maps.
    pub fn uniform(maps: Vec<AffineMap>) -> Result<Self, IfsError> {
        let n = maps.len().max(1) as i64;
        let weights = vec![rational::ratio(1, n); maps.len()];
        Self::new(maps, weights)
    }

    pub fn maps(&self) -> &[AffineMap] {
        &self.maps
    }

    pub fn weights(&self) -> &[BigRational] {
        &self.weights
    }

    pub fn hull(&self) -> &Interval {
        &self.hull
    }

    pub fn integer_form(&self) -> &IntegerForm {
        &self.integer
    }

    pub fn len(&self) -> usize {
        self.maps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.maps.is_empty()
    }

    /// `ρ = max |s_i|`.
    pub fn contraction(&self) -> BigRational {
        self.maps.iter().map(|m| m.slope.abs()).max().expect("nonempty")
    }

    /// `min |s_i|`.
    pub fn min_contraction(&self) -> BigRational {
        self.maps.iter().map(|m| m.slope.abs()).min().expect("nonempty")
    }

    pub fn is_homogeneous(&self) -> bool {
        self.maps.iter().all(|m| m.slope == self.maps[0].slope)
    }

    /// `f_{w_1} ∘ ⋯ ∘ f_{w_m}`; the empty word gives the identity.
    pub fn compose(&self, word: &Word) -> Result<AffineMap, IfsError> {
        word.check(self.len())?;
        let mut prefix = ComposedPrefix::new(self);
        for &s in word.symbols() {
            prefix.push(s);
        }
        Ok(prefix.to_map())
    }
}

/// One map in the on-disk format.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MapSpec {
    #[serde(with = "rational::serde_str")]
    pub s: BigRational,
    #[serde(with = "rational::serde_str")]
    pub t: BigRational,
}

/// Unvalidated system definition as read from a JSON file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SystemSpec {
    pub maps: Vec<MapSpec>,
    #[serde(with = "rational::serde_vec")]
    pub weights: Vec<BigRational>,
    #[serde(
        default,
        skip_serializing_if = "Option::is_none",
        with = "optional_interval"
    )]
    pub hull: Option<Vec<BigRational>>,
}

impl SystemSpec {
    pub fn from_json(text: &str) -> Result<Self, IfsError> {
        serde_json::from_str(text).map_err(|e| IfsError::Format(e.to_string()))
    }

    /// Canonical text form: pretty JSON followed by a newline.
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("plain data");
        s.push('\n');
        s
    }
}

mod optional_interval {
    use num_rational::BigRational;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &Option<Vec<BigRational>>, s: S) -> Result<S::Ok, S::Error> {
        match v {
            Some(v) => crate::rational::serde_vec::serialize(v, s),
            None => s.serialize_none(),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<Vec<BigRational>>, D::Error> {
        #[derive(Deserialize)]
        struct Wrap(#[serde(with = "crate::rational::serde_vec")] Vec<BigRational>);
        Ok(Option::<Wrap>::deserialize(d)?.map(|w| w.0))
    }
}

/// Summary of a successful validation.
#[derive(Debug, Clone, PartialEq)]
pub struct ValidationReport {
    pub maps: usize,
    pub hull: Interval,
    pub contraction: BigRational,
    pub fixed_points: Vec<BigRational>,
    pub homogeneous: bool,
}

/// Checks every system invariant, reporting the first one that fails.
pub fn validate(spec: &SystemSpec) -> Result<ValidationReport, IfsError> {
    let system = SelfSimilarSystem::from_spec(spec)?;
    Ok(ValidationReport {
        maps: system.len(),
        hull: system.hull.clone(),
        contraction: system.contraction(),
        fixed_points: system
            .maps
            .iter()
            .map(|m| m.fixed_point().expect("contracting"))
            .collect(),
        homogeneous: system.is_homogeneous(),
    })
}

/// Smallest interval `[a, b]` with `f_i([a, b]) ⊆ [a, b]` for every map.
///
/// The interval map `I ↦ hull(∪ f_i(I))` is iterated in floating point to
/// identify which map realises each endpoint; the endpoints are then solved
/// exactly and certified as a fixed point of the exact interval map. If the
/// guess fails certification every endpoint pattern is tried.
pub fn attractor_hull(maps: &[AffineMap]) -> Result<Interval, IfsError> {
    if maps.is_empty() {
        return Err(IfsError::TooFewMaps(0));
    }
    if let Some(index) = maps.iter().position(|m| !m.is_contracting()) {
        return Err(IfsError::NonContractingMap {
            index: index + 1,
            slope: format_rational(&maps[index].slope),
        });
    }
    let s: Vec<f64> = maps.iter().map(|m| rational::to_f64(&m.slope)).collect();
    let t: Vec<f64> = maps.iter().map(|m| rational::to_f64(&m.offset)).collect();
    let fixed: Vec<f64> = s.iter().zip(&t).map(|(s, t)| t / (1.0 - s)).collect();
    let mut lo = fixed.iter().cloned().fold(f64::INFINITY, f64::min);
    let mut hi = fixed.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let rho = s.iter().map(|s| s.abs()).fold(0.0, f64::max);
    let width0 = (hi - lo).max(f64::MIN_POSITIVE);
    let steps = (10.0 * ((width0 / 2f64.powi(-128)).ln() / (1.0 / rho).ln()).ceil()).max(10.0) as usize;

    let step = |lo: f64, hi: f64| -> (f64, f64, usize, usize) {
        let (mut nlo, mut nhi, mut ilo, mut ihi) = (f64::INFINITY, f64::NEG_INFINITY, 0, 0);
        for i in 0..s.len() {
            let (a, b) = (s[i] * lo + t[i], s[i] * hi + t[i]);
            let (a, b) = if a <= b { (a, b) } else { (b, a) };
            if a < nlo {
                nlo = a;
                ilo = i;
            }
            if b > nhi {
                nhi = b;
                ihi = i;
            }
        }
        (nlo, nhi, ilo, ihi)
    };

    let mut guess = None;
    for _ in 0..steps {
        let (nlo, nhi, ilo, ihi) = step(lo, hi);
        if !nlo.is_finite() || !nhi.is_finite() {
            return Err(IfsError::NonConvergence(steps));
        }
        guess = Some((ilo, ihi));
        if nlo == lo && nhi == hi {
            break;
        }
        lo = nlo;
        hi = nhi;
    }

    if let Some((i, j)) = guess {
        if let Some(iv) = solve_hull_pattern(maps, i, j) {
            return Ok(iv);
        }
    }
    for i in 0..maps.len() {
        for j in 0..maps.len() {
            if let Some(iv) = solve_hull_pattern(maps, i, j) {
                return Ok(iv);
            }
        }
    }
    Err(IfsError::NonConvergence(steps))
}

/// Solves for the hull assuming map `i` realises the left endpoint and map
/// `j` the right one, returning it only if it is an exact fixed point.
fn solve_hull_pattern(maps: &[AffineMap], i: usize, j: usize) -> Option<Interval> {
    let one = BigRational::one();
    let (si, ti) = (&maps[i].slope, &maps[i].offset);
    let (sj, tj) = (&maps[j].slope, &maps[j].offset);
    let (a, b) = match (si.is_positive(), sj.is_positive()) {
        (true, true) => (ti / (&one - si), tj / (&one - sj)),
        (true, false) => {
            let a = ti / (&one - si);
            let b = sj * &a + tj;
            (a, b)
        }
        (false, true) => {
            let b = tj / (&one - sj);
            let a = si * &b + ti;
            (a, b)
        }
        (false, false) => {
            let a = (si * tj + ti) / (&one - si * sj);
            let b = sj * &a + tj;
            (a, b)
        }
    };
    if a > b {
        return None;
    }
    let candidate = Interval::new(a, b);
    let images: Vec<Interval> = maps.iter().map(|m| m.image(&candidate)).collect();
    let lo = images.iter().map(|iv| &iv.lo).min()?;
    let hi = images.iter().map(|iv| &iv.hi).max()?;
    (lo == &candidate.lo && hi == &candidate.hi).then_some(candidate)
}

/// Conjugates the system by the affine `g` with `g([0, 1]) = hull`, so the
/// returned system `{g⁻¹ ∘ f_i ∘ g}` has hull exactly `[0, 1]`.
pub fn normalize(system: &SelfSimilarSystem) -> Result<(SelfSimilarSystem, AffineMap), IfsError> {
    let hull = system.hull();
    let width = hull.width();
    if width.is_zero() {
        return Err(IfsError::DegenerateHull);
    }
    let g = AffineMap::new(width, hull.lo.clone());
    let conjugated = conjugate(system, &g)?;
    Ok((conjugated, g))
}

/// `{g⁻¹ ∘ f_i ∘ g}` with the same weights.
pub fn conjugate(system: &SelfSimilarSystem, g: &AffineMap) -> Result<SelfSimilarSystem, IfsError> {
    let g_inv = g.inverse().ok_or(IfsError::DegenerateHull)?;
    let maps = system
        .maps()
        .iter()
        .map(|f| g_inv.compose(&f.compose(g)))
        .collect();
    SelfSimilarSystem::new(maps, system.weights().to_vec())
}

/// Small library of named systems used by tests, examples and the CLI.
pub mod presets {
    use super::*;
    use crate::rational::{int, ratio};

    /// Middle-thirds Cantor system `{x/3, (x+2)/3}` with equal weights.
    pub fn cantor() -> SelfSimilarSystem {
        SelfSimilarSystem::uniform(vec![
            AffineMap::new(ratio(1, 3), int(0)),
            AffineMap::new(ratio(1, 3), ratio(2, 3)),
        ])
        .expect("valid")
    }

    /// `{x/2, (x+1)/2}`: Lebesgue measure on `[0, 1]`.
    pub fn dyadic() -> SelfSimilarSystem {
        SelfSimilarSystem::uniform(vec![
            AffineMap::new(ratio(1, 2), int(0)),
            AffineMap::new(ratio(1, 2), ratio(1, 2)),
        ])
        .expect("valid")
    }

    /// `{x/β, (x+1)/β}` with equal weights.
    pub fn bernoulli_convolution(beta: &BigRational) -> Result<SelfSimilarSystem, IfsError> {
        let inv = beta.recip();
        SelfSimilarSystem::uniform(vec![
            AffineMap::new(inv.clone(), int(0)),
            AffineMap::new(inv.clone(), inv),
        ])
    }
}

#[cfg(test)]
mod tests {
    use super::presets::*;
    use super::*;
    use crate::rational::{int, ratio};

    fn map(s: BigRational, t: BigRational) -> AffineMap {
        AffineMap::new(s, t)
    }

    #[test]
    fn cantor_is_valid() {
        let spec = cantor().to_spec();
        let report = validate(&spec).unwrap();
        assert_eq!(report.hull, Interval::unit());
        assert_eq!(report.contraction, ratio(1, 3));
    }

    #[test]
    fn weight_and_slope_errors() {
        let maps = cantor().maps().to_vec();
        let err = SelfSimilarSystem::new(maps.clone(), vec![ratio(1, 2), ratio(1, 3)]).unwrap_err();
        assert!(matches!(err, IfsError::WeightSumError { .. }));
        let bad = vec![map(ratio(3, 2), int(0)), maps[1].clone()];
        let err = SelfSimilarSystem::new(bad, vec![ratio(1, 2), ratio(1, 2)]).unwrap_err();
        assert!(matches!(err, IfsError::NonContractingMap { index: 1, .. }));
        let err = SelfSimilarSystem::new(
            vec![map(ratio(1, 2), int(0)), map(ratio(1, 3), int(0))],
            vec![ratio(1, 2), ratio(1, 2)],
        )
        .unwrap_err();
        assert!(matches!(err, IfsError::DegenerateFixedPoints(_)));
        let err = SelfSimilarSystem::with_hull(
            maps,
            vec![ratio(1, 2), ratio(1, 2)],
            Some(Interval::new(int(0), ratio(1, 2))),
        )
        .unwrap_err();
        assert_eq!(err, IfsError::HullNotInvariant { index: 2 });
    }

    #[test]
    fn compose_examples() {
        let c = cantor();
        assert_eq!(c.compose(&Word::empty()).unwrap(), AffineMap::identity());
        let m12 = c.compose(&Word::new(vec![1, 2])).unwrap();
        assert_eq!(m12, map(ratio(1, 9), ratio(2, 9)));
        let m21 = c.compose(&Word::new(vec![2, 1])).unwrap();
        assert_eq!(m21, map(ratio(1, 9), ratio(2, 3)));
        assert!(matches!(
            c.compose(&Word::new(vec![3])),
            Err(IfsError::SymbolOutOfRange { symbol: 3, maps: 2 })
        ));
        assert!(c.compose(&Word::new(vec![0])).is_err());
    }

    #[test]
    fn hull_examples() {
        assert_eq!(attractor_hull(cantor().maps()).unwrap(), Interval::unit());
        assert_eq!(attractor_hull(dyadic().maps()).unwrap(), Interval::unit());
        let beta = bernoulli_convolution(&ratio(5, 2)).unwrap();
        assert_eq!(beta.hull(), &Interval::new(int(0), ratio(2, 3)));
    }

    #[test]
    fn hull_with_negative_slopes() {
        // x ↦ -x/2 and x ↦ -x/2 + 1: hull [a, b] with a = -b/2, b = -a/2 + 1.
        let maps = vec![map(ratio(-1, 2), int(0)), map(ratio(-1, 2), int(1))];
        let hull = attractor_hull(&maps).unwrap();
        assert_eq!(hull, Interval::new(ratio(-2, 3), ratio(4, 3)));
        for m in &maps {
            assert!(hull.contains_interval(&m.image(&hull)));
        }
        // Mixed orientation.
        let maps = vec![map(ratio(1, 3), int(0)), map(ratio(-1, 3), int(1))];
        let hull = attractor_hull(&maps).unwrap();
        assert_eq!(hull, Interval::new(int(0), int(1)));
    }

    #[test]
    fn hull_rejects_expanding_maps() {
        let maps = vec![map(int(2), int(0)), map(ratio(1, 2), int(1))];
        assert!(matches!(attractor_hull(&maps), Err(IfsError::NonContractingMap { .. })));
    }

    #[test]
    fn normalize_examples() {
        let (c, g) = normalize(&cantor()).unwrap();
        assert_eq!(g, AffineMap::identity());
        assert_eq!(c, cantor());

        let shifted = SelfSimilarSystem::uniform(vec![
            map(ratio(1, 3), int(1)),
            map(ratio(1, 3), ratio(2, 3) + int(1)),
        ])
        .unwrap();
        assert_eq!(shifted.hull(), &Interval::new(ratio(3, 2), ratio(5, 2)));
        let (n, g) = normalize(&shifted).unwrap();
        assert_eq!(g, map(int(1), ratio(3, 2)));
        assert_eq!(n, cantor());

        let beta = bernoulli_convolution(&ratio(5, 2)).unwrap();
        let (n, g) = normalize(&beta).unwrap();
        assert_eq!(g, map(ratio(2, 3), int(0)));
        assert_eq!(n.hull(), &Interval::unit());
        assert_eq!(n.weights(), beta.weights());
    }

    #[test]
    fn json_round_trip_is_bit_exact() {
        let text = "{\n  \"maps\": [\n    {\n      \"s\": \"1/3\",\n      \"t\": \"0\"\n    },\n    {\n      \"s\": \"-1/3\",\n      \"t\": \"2/3\"\n    }\n  ],\n  \"weights\": [\n    \"1/4\",\n    \"3/4\"\n  ]\n}\n";
        let spec = SystemSpec::from_json(text).unwrap();
        assert_eq!(spec.to_json(), text);
        let with_hull = SelfSimilarSystem::from_spec(&spec).unwrap().to_spec();
        let again = SystemSpec::from_json(&with_hull.to_json()).unwrap();
        assert_eq!(again, with_hull);
    }

    #[test]
    fn malformed_files() {
        let bad = r#"{"maps":[{"s":"1/0","t":"0"}],"weights":["1"]}"#;
        assert!(matches!(SystemSpec::from_json(bad), Err(IfsError::Format(_))));
        let extra = r#"{"maps":[],"weights":[],"colour":"red"}"#;
        assert!(SystemSpec::from_json(extra).is_err());
    }

    #[test]
    fn composed_prefix_matches_rational_composition() {
        let sys = SelfSimilarSystem::uniform(vec![
            map(ratio(2, 5), ratio(1, 7)),
            map(ratio(-1, 3), ratio(5, 6)),
            map(ratio(1, 4), ratio(-1, 2)),
        ])
        .unwrap();
        let word = Word::new(vec![1, 3, 2, 2, 1, 3]);
        let mut expected = AffineMap::identity();
        for &s in word.symbols() {
            expected = expected.compose(&sys.maps()[s as usize - 1]);
        }
        assert_eq!(sys.compose(&word).unwrap(), expected);
    }
}
