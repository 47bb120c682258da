//! Pisot classification of monic integer polynomials.

use super::poly::{bisect_root, isolate_roots, isolate_roots_refined, IntPoly, RootDisk};
use super::AlgebraError;
use crate::ifs::Interval;
use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Zero};

/// Degree cap for the subset search in the irreducibility test.
pub const MAX_DEGREE: usize = 24;
const MAX_PRECISION_BITS: u32 = 8192;

#[derive(Debug, Clone, PartialEq)]
pub struct PisotReport {
    /// Coefficients, lowest degree first.
    pub polynomial: IntPoly,
    /// Enclosure of the real root of largest modulus, when that root is real and exceeds one.
    pub dominant_root: Option<Interval>,
    /// Modulus enclosures of every other root.
    pub conjugate_moduli: Vec<Interval>,
    pub is_pisot: bool,
}

/// Decides whether the root of largest modulus of `poly` is a Pisot number.
///
/// The polynomial must be monic and irreducible over ℚ. Every root is
/// isolated in a certified disk, and disks are refined until each conjugate
/// modulus is decisively below or above one. Self-reciprocal inputs are
/// decided from their root pairing `z ↔ 1/z`, which also covers roots lying
/// exactly on the unit circle.
pub fn is_pisot(poly: &IntPoly) -> Result<PisotReport, AlgebraError> {
    if poly.degree() == 0 {
        return Err(AlgebraError::InvalidInput("constant polynomial".into()));
    }
    if !poly.is_monic() {
        return Err(AlgebraError::NotAlgebraicInteger(poly.to_string()));
    }
    if poly.degree() > MAX_DEGREE {
        return Err(AlgebraError::InvalidInput(format!("degree {} exceeds {MAX_DEGREE}", poly.degree())));
    }
    if poly.degree() == 1 {
        // x + c: the single root -c is Pisot iff it is an integer ≥ 2.
        let root = BigRational::from_integer(-poly.coeffs()[0].clone());
        let is_pisot = root > BigRational::one();
        return Ok(PisotReport {
            polynomial: poly.clone(),
            dominant_root: is_pisot.then(|| Interval::new(root.clone(), root)),
            conjugate_moduli: Vec::new(),
            is_pisot,
        });
    }
    if poly.coeffs()[0].is_zero() || poly.gcd_degree(&poly.derivative()) > 0 {
        return Err(AlgebraError::ReduciblePolynomial(poly.to_string()));
    }
    let disks = isolate_roots(poly, MAX_PRECISION_BITS)?;
    if let Some(factor) = find_factor(poly, &disks) {
        return Err(AlgebraError::ReduciblePolynomial(format!("{poly} has factor {factor}")));
    }

    let one = BigRational::one();
    let dominant_idx = disks
        .iter()
        .enumerate()
        .filter(|(_, d)| d.is_real() && d.approx().re > 0.0)
        .max_by(|a, b| a.1.approx().re.partial_cmp(&b.1.approx().re).expect("finite"))
        .map(|(i, _)| i);

    let dominant_root = match dominant_idx {
        Some(i) => {
            let iv = bisect_root(poly, &disks[i].real_bracket(), 64)?;
            (iv.lo > one).then_some(iv)
        }
        None => None,
    };
    let conjugate_moduli: Vec<Interval> = disks
        .iter()
        .enumerate()
        .filter(|(i, _)| dominant_root.is_none() || Some(*i) != dominant_idx)
        .map(|(_, d)| d.modulus_enclosure())
        .collect();

    let is_pisot = if dominant_root.is_none() {
        false
    } else if poly.is_self_reciprocal() {
        // Roots pair up as z, 1/z; only x² − a x + 1 with |a| ≥ 3 leaves a
        // single root outside the closed unit disk.
        poly.degree() == 2
    } else {
        // No root lies on the unit circle, so refinement is decisive.
        let mut verdict = None;
        let mut bits = 64;
        let mut moduli = conjugate_moduli.clone();
        while verdict.is_none() {
            if moduli.iter().all(|m| m.hi < one) {
                verdict = Some(true);
            } else if moduli.iter().any(|m| m.lo > one) {
                verdict = Some(false);
            } else {
                bits *= 2;
                if bits > MAX_PRECISION_BITS {
                    return Err(AlgebraError::PrecisionExhausted(poly.to_string()));
                }
                moduli = refined_moduli(poly, dominant_idx, bits)?;
            }
        }
        verdict.expect("decided")
    };

    Ok(PisotReport {
        polynomial: poly.clone(),
        dominant_root,
        conjugate_moduli,
        is_pisot,
    })
}

fn refined_moduli(poly: &IntPoly, skip: Option<usize>, bits: u32) -> Result<Vec<Interval>, AlgebraError> {
    let disks = isolate_roots_refined(poly, bits, MAX_PRECISION_BITS)?;
    Ok(disks
        .iter()
        .enumerate()
        .filter(|(i, _)| Some(*i) != skip)
        .map(|(_, d)| d.modulus_enclosure())
        .collect())
}

/// Searches for a monic integer factor among products of conjugation-closed
/// root subsets of size at most `deg / 2`, verifying candidates by exact division.
fn find_factor(poly: &IntPoly, disks: &[RootDisk]) -> Option<IntPoly> {
    let roots: Vec<Complex64> = disks.iter().map(|d| d.approx()).collect();
    // Group roots into real singletons and conjugate pairs.
    let mut groups: Vec<Vec<Complex64>> = Vec::new();
    let mut used = vec![false; roots.len()];
    for i in 0..roots.len() {
        if used[i] {
            continue;
        }
        used[i] = true;
        if roots[i].im == 0.0 {
            groups.push(vec![roots[i]]);
        } else {
            let j = (0..roots.len())
                .filter(|&j| !used[j])
                .min_by(|&a, &b| {
                    (roots[a] - roots[i].conj())
                        .norm()
                        .partial_cmp(&(roots[b] - roots[i].conj()).norm())
                        .expect("finite")
                })?;
            used[j] = true;
            groups.push(vec![roots[i], roots[j]]);
        }
    }
    let d = poly.degree();
    let g = groups.len();
    for mask in 1u64..(1u64 << g) - 1 {
        let subset: Vec<Complex64> = (0..g)
            .filter(|k| mask >> k & 1 == 1)
            .flat_map(|k| groups[k].iter().cloned())
            .collect();
        if subset.len() > d / 2 {
            continue;
        }
        let mut coeffs = vec![Complex64::new(1.0, 0.0)];
        for r in &subset {
            let mut next = vec![Complex64::new(0.0, 0.0); coeffs.len() + 1];
            for (k, c) in coeffs.iter().enumerate() {
                next[k + 1] += c;
                next[k] -= c * r;
            }
            coeffs = next;
        }
        let near_integer = coeffs
            .iter()
            .all(|c| c.im.abs() < 0.25 && (c.re - c.re.round()).abs() < 0.25 && c.re.abs() < 1e15);
        if !near_integer {
            continue;
        }
        let candidate = IntPoly::new(coeffs.iter().map(|c| BigInt::from(c.re.round() as i64)).collect());
        if let Some(rem) = poly.rem_monic(&candidate) {
            if rem.coeffs().iter().all(|c| c.is_zero()) {
                return Some(candidate);
            }
        }
    }
    None
}
