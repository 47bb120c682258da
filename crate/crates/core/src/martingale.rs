//! Stopping times `β_n(ω) = min{m : |f'_{ω|m}| < p^{-n}}`, the factor
//! `r(ω, n) = p^n f'_{ω|β_n}`, Fourier modes of the cylinder pushforwards
//! `T_p^n ∘ f_{ω|β_n} ν`, and the gap between their average and the
//! empirical orbit measure.

use crate::fourier::empirical::product_mod_one;
use crate::fourier::{fourier_exact, FourierError, FourierValue};
use crate::ifs::{AffineMap, ComposedPrefix, SelfSimilarSystem};
use crate::rational::{exp_2pi_i, format_rational, to_f64, unit_phase};
use crate::sampling::{digits, orbit_sequence, tail_digits, SampledWords, SamplingError, WordSource, DEFAULT_GUARD};
use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::Serialize;
use std::f64::consts::PI;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum MartingaleError {
    #[error("word stream ended after {0} symbols")]
    StreamExhausted(usize),
    #[error("base p = {0} must be at least 2")]
    InvalidBase(u64),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error(transparent)]
    Sampling(#[from] SamplingError),
    #[error(transparent)]
    Fourier(#[from] FourierError),
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StoppingRecord {
    pub n: u64,
    pub p: u64,
    pub beta: usize,
    /// The composed map `f_{ω|β_n}`; its slope is the signed slope product.
    #[serde(serialize_with = "serialize_map")]
    pub map: AffineMap,
    /// `r(ω, n) = p^n · f'_{ω|β_n}`.
    #[serde(serialize_with = "crate::rational::serde_str::serialize")]
    pub r: BigRational,
}

fn serialize_map<S: serde::Serializer>(m: &AffineMap, s: S) -> Result<S::Ok, S::Error> {
    use serde::ser::SerializeStruct;
    let mut st = s.serialize_struct("map", 2)?;
    st.serialize_field("slope", &format_rational(&m.slope))?;
    st.serialize_field("offset", &format_rational(&m.offset))?;
    st.end()
}

impl StoppingRecord {
    pub fn slope_product(&self) -> &BigRational {
        &self.map.slope
    }
}

/// `C_0 = min_i |s_i|`. Minimality of `β_n` gives
/// `|f'_{ω|β_n - 1}| ≥ p^{-n}`, and one more factor costs at most `C_0`.
pub fn c0(system: &SelfSimilarSystem) -> BigRational {
    system.min_contraction()
}

/// `r(ω, n)`.
pub fn r_factor(record: &StoppingRecord) -> &BigRational {
    &record.r
}

fn check_base(p: u64) -> Result<(), MartingaleError> {
    if p < 2 {
        Err(MartingaleError::InvalidBase(p))
    } else {
        Ok(())
    }
}

/// Records for `n = 0 … count-1`, reading the word once.
pub fn stopping_times(
    system: &SelfSimilarSystem,
    source: &mut dyn WordSource,
    p: u64,
    count: u64,
) -> Result<Vec<StoppingRecord>, MartingaleError> {
    check_base(p)?;
    let mut prefix = ComposedPrefix::new(system);
    let mut out = Vec::with_capacity(count as usize);
    let pb = BigInt::from(p);
    let mut p_pow = BigInt::from(1);
    for n in 0..count {
        // |P| / D^m < p^{-n}  ⟺  |P| · p^n < D^m.
        loop {
            let (slope_num, _, den) = prefix.raw();
            if prefix.depth() > 0 && slope_num.abs() * &p_pow < *den {
                break;
            }
            let m = prefix.depth();
            let symbol = source
                .prefix(m + 1)
                .ok_or(MartingaleError::StreamExhausted(m))?[m];
            prefix.push(symbol);
        }
        let map = prefix.to_map();
        let r = &map.slope * BigRational::from_integer(p_pow.clone());
        out.push(StoppingRecord {
            n,
            p,
            beta: prefix.depth(),
            map,
            r,
        });
        p_pow *= &pb;
    }
    Ok(out)
}

/// The single record for `n`.
pub fn stopping_time(
    system: &SelfSimilarSystem,
    source: &mut dyn WordSource,
    n: u64,
    p: u64,
) -> Result<StoppingRecord, MartingaleError> {
    check_base(p)?;
    let threshold = BigInt::from(p).pow(n as u32);
    let mut prefix = ComposedPrefix::new(system);
    loop {
        let (slope_num, _, den) = prefix.raw();
        if prefix.depth() > 0 && slope_num.abs() * &threshold < *den {
            break;
        }
        let m = prefix.depth();
        let symbol = source
            .prefix(m + 1)
            .ok_or(MartingaleError::StreamExhausted(m))?[m];
        prefix.push(symbol);
    }
    let map = prefix.to_map();
    let r = &map.slope * BigRational::from_integer(threshold);
    Ok(StoppingRecord {
        n,
        p,
        beta: prefix.depth(),
        map,
        r,
    })
}

/// `F_q(T_p^n ∘ f_{ω|β_n} ν) = e^{2πi q p^n f_{ω|β_n}(0)} · F_{q r}(ν)` for integer `q`.
pub fn cylinder_mode(
    system: &SelfSimilarSystem,
    record: &StoppingRecord,
    q: i64,
    tol: f64,
    budget: u64,
) -> Result<FourierValue, MartingaleError> {
    let qr = BigRational::from_integer(BigInt::from(q));
    if q == 0 {
        return Ok(FourierValue {
            re: 1.0,
            im: 0.0,
            error: 0.0,
            q: qr,
            nodes: 0,
        });
    }
    let inner = fourier_exact(system, &(&qr * &record.r), tol, budget)?;
    let p_pow = BigInt::from(record.p).pow(record.n as u32);
    let phase = &qr * BigRational::from_integer(p_pow) * &record.map.offset;
    let (c, s) = exp_2pi_i(&phase);
    let v = Complex64::new(c, s) * Complex64::new(inner.re, inner.im);
    Ok(FourierValue {
        re: v.re,
        im: v.im,
        error: inner.error + 2.0 * f64::EPSILON,
        q: qr,
        nodes: inner.nodes,
    })
}

/// Bits kept when `q·r` is rounded to a dyadic rational.
const FREQUENCY_BITS: u64 = 64;

/// [`cylinder_mode`] for `n = 0 … count-1` along one word, with error bounds.
///
/// `q·r` and `q p^n f_{ω|β_n}(0)` have denominators that grow linearly in
/// `n`, so exact evaluation costs grow with `n`. Instead `q·r` is rounded to
/// `y' ∈ 2^{-64}ℤ`; since `|F_y − F_{y'}| ≤ 2π|y − y'|·max|x|` over the hull,
/// the rounding enters the error bound. The phase is read to 64 bits from
/// the integer form of the prefix.
pub fn cylinder_modes(
    system: &SelfSimilarSystem,
    source: &mut dyn WordSource,
    p: u64,
    q: i64,
    count: u64,
    tol: f64,
    budget: u64,
) -> Result<Vec<(Complex64, f64)>, MartingaleError> {
    check_base(p)?;
    if q == 0 {
        return Ok(vec![(Complex64::new(1.0, 0.0), 0.0); count as usize]);
    }
    let hull = system.hull();
    let reach = to_f64(&hull.lo.abs().max(hull.hi.abs()));
    let two_k = BigInt::from(1) << FREQUENCY_BITS;
    let scale = 2f64.powi(-(FREQUENCY_BITS as i32));
    let qb = BigInt::from(q);
    let pb = BigInt::from(p);
    let mut qp = qb.clone();
    let mut prefix = ComposedPrefix::new(system);
    let mut jobs = Vec::with_capacity(count as usize);
    let mut p_pow = BigInt::from(1);
    for _ in 0..count {
        loop {
            let (slope_num, _, den) = prefix.raw();
            if prefix.depth() > 0 && slope_num.abs() * &p_pow < *den {
                break;
            }
            let m = prefix.depth();
            let symbol = source
                .prefix(m + 1)
                .ok_or(MartingaleError::StreamExhausted(m))?[m];
            prefix.push(symbol);
        }
        let (pn, qn, den) = prefix.raw();
        // y' = round(q p^n P · 2^K / D^m) / 2^K
        let a = &qp * pn;
        let y_num: BigInt = (a * &two_k * 2u32 + den).div_floor(&(den * 2u32));
        let y = BigRational::new(y_num, two_k.clone());
        // φ = frac(q p^n Q / D^m) to 64 bits
        let rem = (&qp * qn).mod_floor(den);
        let phi = ((rem << FREQUENCY_BITS) / den).to_u64().expect("below 2^64") as f64 * scale;
        jobs.push((y, phi));
        p_pow *= &pb;
        qp *= &pb;
    }
    let rounding = 2.0 * PI * reach * scale / 2.0 + 2.0 * PI * scale + 4.0 * f64::EPSILON;
    jobs.par_iter()
        .map(|(y, phi)| {
            let inner = fourier_exact(system, y, tol, budget)?;
            let (c, s) = unit_phase(*phi);
            let v = Complex64::new(c, s) * Complex64::new(inner.re, inner.im);
            Ok((v, inner.error + rounding))
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GapRow {
    pub n: usize,
    pub empirical_re: f64,
    pub empirical_im: f64,
    pub cylinder_re: f64,
    pub cylinder_im: f64,
    pub gap: f64,
    /// Bound on the numerical error of `gap`.
    pub error: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GapSeries {
    pub q: i64,
    pub p: u64,
    pub seed: u64,
    pub rows: Vec<GapRow>,
}

/// `|F_q(N^{-1} Σ δ_{T_p^n x_ω}) − F_q(N^{-1} Σ T_p^n ∘ f_{ω|β_n} ν)|` for each
/// `N` in `n_list`, both sides built from the same seeded `ω`, `n = 0 … N-1`.
pub fn martingale_gap(
    system: &SelfSimilarSystem,
    seed: u64,
    q: i64,
    n_list: &[usize],
    p: u64,
    tol: f64,
    budget: u64,
) -> Result<GapSeries, MartingaleError> {
    check_base(p)?;
    if p > u32::MAX as u64 {
        return Err(MartingaleError::InvalidBase(p));
    }
    if n_list.is_empty() || n_list.windows(2).any(|w| w[0] >= w[1]) || n_list[0] == 0 {
        return Err(MartingaleError::InvalidInput("N list must be positive and increasing".into()));
    }
    let n_max = *n_list.last().expect("non-empty");

    // Empirical side: T_p^n(x_ω) from one digit stream deep enough for n_max.
    let mut src = SampledWords::new(system, seed);
    let stream = digits(system, &mut src, p as u32, n_max - 1 + tail_digits(p as u32), DEFAULT_GUARD)?;
    let orbit = orbit_sequence(&stream, n_max)?;
    let qa = (q as f64).abs();
    let emp_terms: Vec<Complex64> = orbit
        .values
        .iter()
        .map(|&x| {
            let (c, s) = unit_phase(product_mod_one(q, x));
            Complex64::new(c, s)
        })
        .collect();
    let emp_err: Vec<f64> = orbit.errors.iter().map(|e| 2.0 * PI * qa * e + 4.0 * f64::EPSILON * (1.0 + qa)).collect();

    // Cylinder side on the same ω.
    let mut src = SampledWords::new(system, seed);
    let modes = cylinder_modes(system, &mut src, p, q, n_max as u64, tol, budget)?;

    let mut rows = Vec::with_capacity(n_list.len());
    let (mut emp, mut cyl) = (Complex64::zero(), Complex64::zero());
    let (mut emp_e, mut cyl_e) = (0.0, 0.0);
    let mut next = 0;
    for n in 0..n_max {
        emp += emp_terms[n];
        emp_e += emp_err[n];
        cyl += modes[n].0;
        cyl_e += modes[n].1;
        if n + 1 == n_list[next] {
            let nn = (n + 1) as f64;
            let (e, c) = (emp / nn, cyl / nn);
            rows.push(GapRow {
                n: n + 1,
                empirical_re: e.re,
                empirical_im: e.im,
                cylinder_re: c.re,
                cylinder_im: c.im,
                gap: (e - c).norm().min(2.0),
                error: (emp_e + cyl_e) / nn + 4.0 * f64::EPSILON * nn,
            });
            next += 1;
        }
    }
    Ok(GapSeries { q, p, seed, rows })
}
