use crate::ifs::{ComposedPrefix, IfsError, Interval, SelfSimilarSystem, Word};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Signed;

/// Exact enclosure `[center - radius, center + radius]` of a coded point.
#[derive(Debug, Clone, PartialEq)]
pub struct PointApproximation {
    pub center: BigRational,
    pub radius: BigRational,
    pub word: Word,
    pub base_point: BigRational,
}

impl PointApproximation {
    pub fn interval(&self) -> Interval {
        Interval::new(&self.center - &self.radius, &self.center + &self.radius)
    }

    /// A radius-zero approximation of a known point.
    pub fn exact(x: BigRational, word: Word) -> Self {
        PointApproximation {
            center: x.clone(),
            radius: BigRational::from_integer(BigInt::from(0)),
            word,
            base_point: x,
        }
    }
}

/// Encloses `x_ω` for every infinite extension `ω` of `word`.
pub fn point_of_word(
    system: &SelfSimilarSystem,
    word: &Word,
    base_point: &BigRational,
) -> Result<PointApproximation, IfsError> {
    word.check(system.len())?;
    let mut prefix = ComposedPrefix::new(system);
    for &s in word.symbols() {
        prefix.push(s);
    }
    approximation_from_prefix(system, &prefix, word.clone(), base_point)
}

pub(crate) fn approximation_from_prefix(
    system: &SelfSimilarSystem,
    prefix: &ComposedPrefix<'_>,
    word: Word,
    base_point: &BigRational,
) -> Result<PointApproximation, IfsError> {
    if !system.hull().contains(base_point) {
        return Err(IfsError::BasePointOutsideHull(crate::rational::format_rational(base_point)));
    }
    let map = prefix.to_map();
    Ok(PointApproximation {
        center: map.apply(base_point),
        radius: map.slope.abs() * system.hull().width(),
        word,
        base_point: base_point.clone(),
    })
}
