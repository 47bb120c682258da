//! Integer polynomials and certified root enclosures.

use super::AlgebraError;
use crate::ifs::Interval;
use crate::rational;
use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::fmt;

/// Polynomial with integer coefficients, stored lowest degree first.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct IntPoly {
    coeffs: Vec<BigInt>,
}

impl IntPoly {
    /// Builds from coefficients listed lowest degree first; trailing zeros are dropped.
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.len() > 1 && coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            coeffs.push(BigInt::zero());
        }
        IntPoly { coeffs }
    }

    /// Builds from coefficients listed highest degree first, e.g. `[1, -1, -1]`
    /// for `x² − x − 1`.
    pub fn from_descending(coeffs: &[i64]) -> Self {
        IntPoly::new(coeffs.iter().rev().map(|&c| BigInt::from(c)).collect())
    }

    /// Parses a comma separated, highest-degree-first coefficient list.
    pub fn parse_descending(s: &str) -> Result<Self, AlgebraError> {
        let coeffs = s
            .split(',')
            .map(|c| c.trim().parse::<BigInt>())
            .collect::<Result<Vec<_>, _>>()
            .map_err(|_| AlgebraError::InvalidInput(format!("bad polynomial {s:?}")))?;
        if coeffs.is_empty() {
            return Err(AlgebraError::InvalidInput("empty polynomial".into()));
        }
        Ok(IntPoly::new(coeffs.into_iter().rev().collect()))
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn leading(&self) -> &BigInt {
        self.coeffs.last().expect("nonempty")
    }

    pub fn is_monic(&self) -> bool {
        self.leading().is_one()
    }

    pub fn eval(&self, x: &BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + BigRational::from_integer(c.clone());
        }
        acc
    }

    pub fn eval_complex(&self, z: Complex64) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for c in self.coeffs.iter().rev() {
            acc = acc * z + c.to_f64().unwrap_or(f64::NAN);
        }
        acc
    }

    pub fn derivative(&self) -> IntPoly {
        if self.degree() == 0 {
            return IntPoly::new(vec![BigInt::zero()]);
        }
        IntPoly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * BigInt::from(i))
                .collect(),
        )
    }

    /// True when the coefficient list reads the same backwards, up to sign.
    pub fn is_self_reciprocal(&self) -> bool {
        let rev: Vec<BigInt> = self.coeffs.iter().rev().cloned().collect();
        rev == self.coeffs || rev.iter().zip(&self.coeffs).all(|(a, b)| a == &-b)
    }

    /// Remainder of division by a monic divisor, or `None` if `divisor` is not monic.
    pub fn rem_monic(&self, divisor: &IntPoly) -> Option<IntPoly> {
        if !divisor.is_monic() {
            return None;
        }
        let dd = divisor.degree();
        let mut r = self.coeffs.clone();
        while r.len() > dd && r.len() > 1 {
            let lead = r.last().cloned().expect("nonempty");
            let shift = r.len() - 1 - dd;
            for (i, c) in divisor.coeffs.iter().enumerate() {
                r[shift + i] -= &lead * c;
            }
            r.pop();
        }
        Some(IntPoly::new(r))
    }

    fn to_rational(&self) -> Vec<BigRational> {
        self.coeffs
            .iter()
            .map(|c| BigRational::from_integer(c.clone()))
            .collect()
    }

    /// Degree of `gcd(self, other)` over the rationals.
    pub fn gcd_degree(&self, other: &IntPoly) -> usize {
        let mut a = trim(self.to_rational());
        let mut b = trim(other.to_rational());
        while !(b.len() == 1 && b[0].is_zero()) {
            let r = rational_rem(&a, &b);
            a = b;
            b = r;
        }
        a.len() - 1
    }
}

impl fmt::Display for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() && self.degree() > 0 {
                continue;
            }
            let sign = if c.is_negative() { "-" } else { "+" };
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            let mag = c.abs();
            match (i, mag.is_one()) {
                (0, _) => write!(f, "{mag}")?,
                (1, true) => write!(f, "x")?,
                (1, false) => write!(f, "{mag}x")?,
                (_, true) => write!(f, "x^{i}")?,
                (_, false) => write!(f, "{mag}x^{i}")?,
            }
        }
        Ok(())
    }
}

fn trim(mut v: Vec<BigRational>) -> Vec<BigRational> {
    while v.len() > 1 && v.last().is_some_and(|c| c.is_zero()) {
        v.pop();
    }
    v
}

fn rational_rem(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    let mut r = a.to_vec();
    let lead_b = b.last().expect("nonempty").clone();
    while r.len() >= b.len() && !(r.len() == 1 && r[0].is_zero()) {
        let factor = r.last().expect("nonempty") / &lead_b;
        let shift = r.len() - b.len();
        for (i, c) in b.iter().enumerate() {
            r[shift + i] -= &factor * c;
        }
        r.pop();
        if r.is_empty() {
            r.push(BigRational::zero());
        }
        r = trim(r);
    }
    r
}

/// Complex number with exact rational parts.
#[derive(Debug, Clone, PartialEq)]
struct QComplex {
    re: BigRational,
    im: BigRational,
}

impl QComplex {
    fn from_f64(z: Complex64) -> Self {
        QComplex {
            re: BigRational::from_float(z.re).unwrap_or_else(BigRational::zero),
            im: BigRational::from_float(z.im).unwrap_or_else(BigRational::zero),
        }
    }

    fn to_f64(&self) -> Complex64 {
        Complex64::new(rational::to_f64(&self.re), rational::to_f64(&self.im))
    }

    fn sub(&self, o: &QComplex) -> QComplex {
        QComplex {
            re: &self.re - &o.re,
            im: &self.im - &o.im,
        }
    }

    fn mul(&self, o: &QComplex) -> QComplex {
        QComplex {
            re: &self.re * &o.re - &self.im * &o.im,
            im: &self.re * &o.im + &self.im * &o.re,
        }
    }

    fn norm_sqr(&self) -> BigRational {
        &self.re * &self.re + &self.im * &self.im
    }

    fn div(&self, o: &QComplex) -> QComplex {
        let n = o.norm_sqr();
        QComplex {
            re: (&self.re * &o.re + &self.im * &o.im) / &n,
            im: (&self.im * &o.re - &self.re * &o.im) / &n,
        }
    }

    fn conj(&self) -> QComplex {
        QComplex {
            re: self.re.clone(),
            im: -self.im.clone(),
        }
    }

    fn round_to(&self, bits: u32) -> QComplex {
        QComplex {
            re: round_dyadic(&self.re, bits),
            im: round_dyadic(&self.im, bits),
        }
    }
}

fn round_dyadic(x: &BigRational, bits: u32) -> BigRational {
    let scale = BigInt::one() << bits;
    let scaled = (x * BigRational::from_integer(scale.clone())).round();
    BigRational::new(scaled.to_integer(), scale)
}

fn eval_q(p: &IntPoly, z: &QComplex) -> QComplex {
    let mut acc = QComplex {
        re: BigRational::zero(),
        im: BigRational::zero(),
    };
    for c in p.coeffs.iter().rev() {
        acc = acc.mul(z);
        acc.re += BigRational::from_integer(c.clone());
    }
    acc
}

/// Rational upper bound for `sqrt(x)`, `x ≥ 0`.
pub(crate) fn sqrt_upper(x: &BigRational) -> BigRational {
    if x.is_zero() {
        return BigRational::zero();
    }
    let mut u = BigRational::from_float(rational::to_f64(x).sqrt() * (1.0 + 1e-12) + 1e-300)
        .unwrap_or_else(BigRational::one);
    while &(&u * &u) < x {
        u = &u * rational::ratio(1001, 1000) + BigRational::from_float(1e-300).expect("finite");
    }
    u
}

/// Rational lower bound for `sqrt(x)`, `x ≥ 0`.
pub(crate) fn sqrt_lower(x: &BigRational) -> BigRational {
    if x.is_zero() {
        return BigRational::zero();
    }
    let mut l = BigRational::from_float(rational::to_f64(x).sqrt() * (1.0 - 1e-12)).unwrap_or_else(BigRational::zero);
    while &(&l * &l) > x {
        l = &l * rational::ratio(999, 1000);
    }
    l
}

/// One certified root: an approximation and a disk radius (squared) that
/// is guaranteed to contain exactly one root of the polynomial.
#[derive(Debug, Clone)]
pub struct RootDisk {
    center: QComplex,
    radius_sq: BigRational,
}

impl RootDisk {
    pub fn approx(&self) -> Complex64 {
        self.center.to_f64()
    }

    pub fn is_real(&self) -> bool {
        self.center.im.is_zero()
    }

    /// Rational enclosure of `|z|` for the root inside this disk.
    pub fn modulus_enclosure(&self) -> Interval {
        let m = self.center.norm_sqr();
        let r = sqrt_upper(&self.radius_sq);
        let lo = sqrt_lower(&m) - &r;
        let lo = if lo.is_negative() { BigRational::zero() } else { lo };
        Interval::new(lo, sqrt_upper(&m) + r)
    }

    /// Real interval known to contain the (real) root.
    pub fn real_bracket(&self) -> Interval {
        let r = sqrt_upper(&self.radius_sq);
        Interval::new(&self.center.re - &r, &self.center.re + &r)
    }
}

/// Aberth–Ehrlich simultaneous iteration in double precision.
fn aberth(p: &IntPoly) -> Vec<Complex64> {
    let d = p.degree();
    let dp = p.derivative();
    let lead = p.leading().to_f64().unwrap_or(1.0);
    let bound = 1.0
        + p.coeffs[..d]
            .iter()
            .map(|c| (c.to_f64().unwrap_or(f64::MAX) / lead).abs())
            .fold(0.0, f64::max);
    let mut z: Vec<Complex64> = (0..d)
        .map(|k| {
            let angle = 2.0 * std::f64::consts::PI * (k as f64 + 0.25) / d as f64 + 0.4;
            Complex64::from_polar(bound * 0.5 + 0.1, angle)
        })
        .collect();
    for _ in 0..500 {
        let mut moved = 0.0f64;
        for i in 0..d {
            let ratio = p.eval_complex(z[i]) / dp.eval_complex(z[i]);
            if !ratio.is_finite() {
                continue;
            }
            let repulsion: Complex64 = (0..d).filter(|&j| j != i).map(|j| 1.0 / (z[i] - z[j])).sum();
            let step = ratio / (1.0 - ratio * repulsion);
            if step.is_finite() {
                z[i] -= step;
                moved = moved.max(step.norm() / (1.0 + z[i].norm()));
            }
        }
        if moved < 1e-17 {
            break;
        }
    }
    z
}

/// Snaps near-real approximations onto the real axis and forces the rest
/// into exact conjugate pairs. Returns `None` when no consistent pairing exists.
fn symmetrize(mut z: Vec<Complex64>) -> Option<Vec<Complex64>> {
    for w in z.iter_mut() {
        if w.im.abs() <= 1e-9 * (1.0 + w.re.abs()) {
            w.im = 0.0;
        }
    }
    let mut out: Vec<Complex64> = z.iter().filter(|w| w.im == 0.0).cloned().collect();
    let mut upper: Vec<Complex64> = z.iter().filter(|w| w.im > 0.0).cloned().collect();
    let lower: Vec<Complex64> = z.iter().filter(|w| w.im < 0.0).cloned().collect();
    if upper.len() != lower.len() {
        return None;
    }
    upper.sort_by(|a, b| a.re.partial_cmp(&b.re).unwrap_or(std::cmp::Ordering::Equal));
    for u in upper {
        out.push(u);
        out.push(u.conj());
    }
    Some(out)
}

/// Newton step `z − p(z)/p'(z)` in exact arithmetic, rounded to `bits` bits.
fn newton_refine(p: &IntPoly, dp: &IntPoly, z: &QComplex, bits: u32) -> QComplex {
    let f = eval_q(p, z);
    let df = eval_q(dp, z);
    if df.norm_sqr().is_zero() {
        return z.clone();
    }
    z.sub(&f.div(&df)).round_to(bits)
}

/// Certified isolating disks for all roots of a squarefree polynomial.
///
/// Uses the Weierstrass correction bound: with `W_i = p(z_i) / Π_{j≠i}(z_i − z_j)`
/// (monic `p`), the disks `|z − z_i| ≤ d·|W_i|` cover all roots and each
/// connected component holds as many roots as disks. Pairwise disjoint disks
/// therefore isolate one root each. All radii are computed exactly.
pub fn isolate_roots(p: &IntPoly, max_bits: u32) -> Result<Vec<RootDisk>, AlgebraError> {
    isolate_roots_refined(p, 0, max_bits)
}

/// As [`isolate_roots`], but keeps refining until the approximations carry
/// at least `min_bits` bits.
pub fn isolate_roots_refined(p: &IntPoly, min_bits: u32, max_bits: u32) -> Result<Vec<RootDisk>, AlgebraError> {
    let d = p.degree();
    if d == 0 {
        return Ok(Vec::new());
    }
    if !p.is_monic() {
        return Err(AlgebraError::NotAlgebraicInteger(p.to_string()));
    }
    let approx = symmetrize(aberth(p)).ok_or_else(|| AlgebraError::PrecisionExhausted(p.to_string()))?;
    let mut centers: Vec<QComplex> = approx.iter().map(|&z| QComplex::from_f64(z)).collect();
    let dp = p.derivative();
    let d_sq = BigRational::from_integer(BigInt::from(d * d));
    let mut bits = 64u32;
    loop {
        if bits >= min_bits {
            if let Some(disks) = certify(p, &centers, &d_sq) {
                return Ok(disks);
            }
        }
        if bits > max_bits {
            return Err(AlgebraError::PrecisionExhausted(p.to_string()));
        }
        bits *= 2;
        // Refine the upper-half-plane and real roots; mirror the rest.
        let mut next = Vec::with_capacity(d);
        let mut i = 0;
        while i < centers.len() {
            let z = newton_refine(p, &dp, &centers[i], bits);
            if centers[i].im.is_zero() {
                let mut z = z;
                z.im = BigRational::zero();
                next.push(z);
                i += 1;
            } else {
                next.push(z.clone());
                next.push(z.conj());
                i += 2;
            }
        }
        centers = next;
    }
}

fn certify(p: &IntPoly, centers: &[QComplex], d_sq: &BigRational) -> Option<Vec<RootDisk>> {
    let n = centers.len();
    let mut disks = Vec::with_capacity(n);
    for i in 0..n {
        let mut denom = QComplex {
            re: BigRational::one(),
            im: BigRational::zero(),
        };
        for j in 0..n {
            if i != j {
                let diff = centers[i].sub(&centers[j]);
                if diff.norm_sqr().is_zero() {
                    return None;
                }
                denom = denom.mul(&diff);
            }
        }
        let f = eval_q(p, &centers[i]);
        let radius_sq = d_sq * f.norm_sqr() / denom.norm_sqr();
        disks.push(RootDisk {
            center: centers[i].clone(),
            radius_sq,
        });
    }
    // (r_i + r_j)² ≤ 2(r_i² + r_j²), so this is a sufficient disjointness test.
    let two = rational::int(2);
    for i in 0..n {
        for j in (i + 1)..n {
            let dist = centers[i].sub(&centers[j]).norm_sqr();
            if &two * (&disks[i].radius_sq + &disks[j].radius_sq) >= dist {
                return None;
            }
        }
    }
    // A non-real center whose disk meets the real axis cannot be told apart from a real root.
    for disk in &disks {
        if !disk.center.im.is_zero() && &disk.center.im * &disk.center.im <= disk.radius_sq {
            return None;
        }
    }
    Some(disks)
}

/// Shrinks a sign-changing bracket of a real root to width at most `2^-bits`.
pub fn bisect_root(p: &IntPoly, bracket: &Interval, bits: u32) -> Result<Interval, AlgebraError> {
    let (mut lo, mut hi) = (bracket.lo.clone(), bracket.hi.clone());
    let mut flo = p.eval(&lo);
    let fhi = p.eval(&hi);
    if flo.is_zero() {
        return Ok(Interval::new(lo.clone(), lo));
    }
    if fhi.is_zero() {
        return Ok(Interval::new(hi.clone(), hi));
    }
    if flo.is_positive() == fhi.is_positive() {
        return Err(AlgebraError::InvalidInput(format!(
            "no sign change of {p} on [{}, {}]",
            rational::format_rational(&lo),
            rational::format_rational(&hi)
        )));
    }
    let target = BigRational::new(BigInt::one(), BigInt::one() << bits);
    // Move the endpoints onto dyadic grid points first to keep sizes bounded.
    while &hi - &lo > target {
        let mid = round_dyadic(&((&lo + &hi) / rational::int(2)), bits + 2);
        let mid = if mid <= lo || mid >= hi {
            (&lo + &hi) / rational::int(2)
        } else {
            mid
        };
        let fm = p.eval(&mid);
        if fm.is_zero() {
            return Ok(Interval::new(mid.clone(), mid));
        }
        if fm.is_positive() == flo.is_positive() {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    Ok(Interval::new(lo, hi))
}

/// A real algebraic number: a root of `poly` isolated by `enclosure`.
#[derive(Debug, Clone, PartialEq)]
pub struct RealAlgebraic {
    pub poly: IntPoly,
    pub enclosure: Interval,
}

impl RealAlgebraic {
    /// Checks that `enclosure` brackets a sign change of `poly` (or is a
    /// degenerate interval at an exact root).
    pub fn new(poly: IntPoly, enclosure: Interval) -> Result<Self, AlgebraError> {
        let lo = poly.eval(&enclosure.lo);
        let hi = poly.eval(&enclosure.hi);
        let ok = if enclosure.lo == enclosure.hi {
            lo.is_zero()
        } else {
            lo.is_zero() || hi.is_zero() || lo.is_positive() != hi.is_positive()
        };
        if !ok {
            return Err(AlgebraError::InvalidInput(format!("enclosure {enclosure} does not bracket a root of {poly}")));
        }
        if poly.gcd_degree(&poly.derivative()) > 0 {
            return Err(AlgebraError::InvalidInput(format!("{poly} is not squarefree")));
        }
        Ok(RealAlgebraic { poly, enclosure })
    }

    pub fn enclose(&self, bits: u32) -> Interval {
        bisect_root(&self.poly, &self.enclosure, bits).expect("validated bracket")
    }
}
