//! Band-wise sup profiles of `|F_q|` and empirical decay-regime fits.

use super::exact::fourier_exact;
use super::{FourierError, FourierValue};
use crate::ifs::SelfSimilarSystem;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive};
use rayon::prelude::*;
use serde::Serialize;
use statrs::distribution::{ContinuousCDF, StudentsT};
use std::collections::BTreeSet;

pub const MAX_BAND: u32 = 40;
pub const DEFAULT_PER_BAND: u64 = 512;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Band {
    pub j: u32,
    /// The band is `[lo, hi)` with `lo = 2^j`, `hi = 2^{j+1}`.
    pub lo: u64,
    pub hi: u64,
    pub sup: f64,
    pub argmax: i64,
    pub evaluated: usize,
    /// Largest error bound among the evaluated values.
    pub max_error: f64,
    pub budget_exceeded: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DecayProfile {
    pub bands: Vec<Band>,
    pub tol: f64,
}

/// Sampling grid for band `j`: the first `per_band` integers of the band
/// and the nearest integers to powers of each slope reciprocal and of each
/// slope denominator that fall inside it.
pub fn band_grid(system: &SelfSimilarSystem, j: u32, per_band: u64) -> Vec<i64> {
    let lo = 1u64 << j;
    let hi = 1u64 << (j + 1);
    let mut grid: BTreeSet<u64> = (lo..hi.min(lo.saturating_add(per_band))).collect();
    let mut bases: Vec<BigRational> = Vec::new();
    for m in system.maps() {
        bases.push(m.slope.abs().recip());
        bases.push(BigRational::from_integer(m.slope.denom().clone()));
    }
    let lo_r = BigRational::from_integer(BigInt::from(lo));
    let hi_r = BigRational::from_integer(BigInt::from(hi));
    for b in bases {
        if b <= BigRational::from_integer(BigInt::from(1)) {
            continue;
        }
        let mut p = b.clone();
        while p < hi_r {
            if p >= lo_r {
                let nearest = p.round().to_integer().to_u64().expect("inside band");
                if nearest >= lo && nearest < hi {
                    grid.insert(nearest);
                }
            }
            p *= &b;
        }
    }
    grid.into_iter().map(|q| q as i64).collect()
}

/// Evaluates `sup |F_q|` over the grid of each band `j = 0 … j_max`.
pub fn decay_profile(
    system: &SelfSimilarSystem,
    j_max: u32,
    per_band: u64,
    tol: f64,
    budget: u64,
) -> Result<DecayProfile, FourierError> {
    if j_max > MAX_BAND {
        return Err(FourierError::InvalidInput(format!("j_max {j_max} exceeds {MAX_BAND}")));
    }
    let bands = (0..=j_max)
        .into_par_iter()
        .map(|j| evaluate_band(system, j, &band_grid(system, j, per_band), tol, budget))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(DecayProfile { bands, tol })
}

fn evaluate_band(system: &SelfSimilarSystem, j: u32, grid: &[i64], tol: f64, budget: u64) -> Result<Band, FourierError> {
    let mut band = Band {
        j,
        lo: 1u64 << j,
        hi: 1u64 << (j + 1),
        sup: 0.0,
        argmax: grid.first().copied().unwrap_or(0),
        evaluated: 0,
        max_error: 0.0,
        budget_exceeded: false,
    };
    for &q in grid {
        let value = match fourier_exact(system, &BigRational::from_integer(BigInt::from(q)), tol, budget) {
            Ok(v) => v,
            Err(FourierError::BudgetExceeded(partial)) => {
                band.budget_exceeded = true;
                *partial
            }
            Err(e) => return Err(e),
        };
        record(&mut band, q, &value);
    }
    Ok(band)
}

fn record(band: &mut Band, q: i64, value: &FourierValue) {
    let m = value.modulus();
    if band.evaluated == 0 || m > band.sup {
        band.sup = m;
        band.argmax = q;
    }
    band.max_error = band.max_error.max(value.error);
    band.evaluated += 1;
}

/// Builds a profile from given band sups (for synthetic checks and replay).
pub fn profile_from_sups(sups: &[f64]) -> DecayProfile {
    let bands = sups
        .iter()
        .enumerate()
        .map(|(j, &sup)| Band {
            j: j as u32,
            lo: 1u64 << j,
            hi: 1u64 << (j + 1),
            sup,
            argmax: 1i64 << j,
            evaluated: 1,
            max_error: 0.0,
            budget_exceeded: false,
        })
        .collect();
    DecayProfile { bands, tol: 0.0 }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Regime {
    Polynomial,
    Logarithmic,
    Loglog,
    None,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RegimeFit {
    pub regime: Regime,
    pub alpha: f64,
    pub intercept: f64,
    pub r_squared: f64,
    pub rss: f64,
    pub residuals: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DecayFit {
    pub regime: Regime,
    pub alpha: Option<f64>,
    /// 95% confidence interval for `alpha`.
    pub confidence_interval: Option<(f64, f64)>,
    pub residuals: Vec<f64>,
    pub bands_used: Vec<u32>,
    pub candidates: Vec<RegimeFit>,
}

/// Bands at or above this index enter the fits; below it the logarithmic
/// regressors are undefined or negative.
pub const FIRST_FIT_BAND: u32 = 2;
pub const MIN_FIT_BANDS: usize = 8;

fn regressor(regime: Regime, j: u32) -> f64 {
    let log_q = j as f64 * std::f64::consts::LN_2;
    match regime {
        Regime::Polynomial => log_q,
        Regime::Logarithmic => log_q.ln(),
        Regime::Loglog => log_q.ln().ln(),
        Regime::None => unreachable!("no regressor"),
    }
}

fn usable(profile: &DecayProfile) -> Vec<&Band> {
    profile
        .bands
        .iter()
        .filter(|b| b.j >= FIRST_FIT_BAND && b.sup > 0.0 && b.sup.is_finite() && !b.budget_exceeded)
        .collect()
}

/// Fits `log sup_j = c − α·X_j` for `X_j` equal to `log q`, `log log q` and
/// `log log log q` at `q = 2^j`, and keeps the best fit.
pub fn decay_fit(profile: &DecayProfile) -> Result<DecayFit, FourierError> {
    let bands = usable(profile);
    if bands.len() < MIN_FIT_BANDS {
        return Err(FourierError::InsufficientBands {
            have: bands.len(),
            need: MIN_FIT_BANDS,
        });
    }
    let y: Vec<f64> = bands.iter().map(|b| b.sup.ln()).collect();
    let n = y.len() as f64;
    let y_mean = y.iter().sum::<f64>() / n;
    let tss: f64 = y.iter().map(|v| (v - y_mean).powi(2)).sum();
    let used: Vec<u32> = bands.iter().map(|b| b.j).collect();

    let mut candidates = Vec::new();
    let mut stats = Vec::new();
    for regime in [Regime::Polynomial, Regime::Logarithmic, Regime::Loglog] {
        let x: Vec<f64> = bands.iter().map(|b| regressor(regime, b.j)).collect();
        let x_mean = x.iter().sum::<f64>() / n;
        let sxx: f64 = x.iter().map(|v| (v - x_mean).powi(2)).sum();
        let sxy: f64 = x.iter().zip(&y).map(|(a, b)| (a - x_mean) * (b - y_mean)).sum();
        let slope = sxy / sxx;
        let intercept = y_mean - slope * x_mean;
        let residuals: Vec<f64> = x.iter().zip(&y).map(|(a, b)| b - (intercept + slope * a)).collect();
        let rss: f64 = residuals.iter().map(|r| r * r).sum();
        let r_squared = if tss > 0.0 { 1.0 - rss / tss } else { 0.0 };
        stats.push((sxx, rss));
        candidates.push(RegimeFit {
            regime,
            alpha: -slope,
            intercept,
            r_squared,
            rss,
            residuals,
        });
    }
    let best = (0..candidates.len())
        .min_by(|&a, &b| candidates[a].rss.total_cmp(&candidates[b].rss))
        .expect("three candidates");
    let fit = &candidates[best];
    let flat = tss <= 1e-18 * n;
    if flat || fit.r_squared < 0.5 || fit.alpha <= 0.0 {
        return Ok(DecayFit {
            regime: Regime::None,
            alpha: None,
            confidence_interval: None,
            residuals: fit.residuals.clone(),
            bands_used: used,
            candidates,
        });
    }
    let (sxx, rss) = stats[best];
    let se = (rss / (n - 2.0) / sxx).sqrt();
    let t = StudentsT::new(0.0, 1.0, n - 2.0)
        .expect("at least six degrees of freedom")
        .inverse_cdf(0.975);
    Ok(DecayFit {
        regime: fit.regime,
        alpha: Some(fit.alpha),
        confidence_interval: Some((fit.alpha - t * se, fit.alpha + t * se)),
        residuals: fit.residuals.clone(),
        bands_used: used,
        candidates,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DelCheck {
    /// `None` when too few bands are available to decide.
    pub consistent: Option<bool>,
    /// Envelope constant `C`, calibrated on the first half of the usable bands.
    pub constant: Option<f64>,
    pub alpha: f64,
    pub calibration_bands: Vec<u32>,
    pub checked_bands: Vec<u32>,
}

/// Whether the profile stays below `C / (log log 2^j)^{1+α}` on the later
/// bands, with `C` set by the earlier ones. Diagnostic only.
pub fn del_criterion_check(profile: &DecayProfile, alpha: f64) -> Result<DelCheck, FourierError> {
    if !(alpha > 0.0) {
        return Err(FourierError::InvalidInput(format!("alpha {alpha} must be positive")));
    }
    let bands: Vec<&Band> = profile
        .bands
        .iter()
        .filter(|b| b.j >= FIRST_FIT_BAND && b.sup.is_finite())
        .collect();
    let mut check = DelCheck {
        consistent: None,
        constant: None,
        alpha,
        calibration_bands: Vec::new(),
        checked_bands: Vec::new(),
    };
    if bands.len() < 4 {
        return Ok(check);
    }
    let envelope = |j: u32| regressor(Regime::Logarithmic, j).powf(1.0 + alpha);
    let half = bands.len() / 2;
    let c = bands[..half]
        .iter()
        .map(|b| b.sup * envelope(b.j))
        .fold(0.0, f64::max);
    let ok = bands[half..]
        .iter()
        .all(|b| b.sup <= c / envelope(b.j) + b.max_error + 1e-12);
    check.consistent = Some(ok);
    check.constant = Some(c);
    check.calibration_bands = bands[..half].iter().map(|b| b.j).collect();
    check.checked_bands = bands[half..].iter().map(|b| b.j).collect();
    Ok(check)
}

impl std::fmt::Display for Regime {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Regime::Polynomial => "polynomial",
            Regime::Logarithmic => "logarithmic",
            Regime::Loglog => "loglog",
            Regime::None => "none",
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ifs::presets::{cantor, dyadic};

    #[test]
    fn synthetic_polynomial() {
        let sups: Vec<f64> = (0..20).map(|j| 2f64.powf(-(j as f64) / 2.0)).collect();
        let fit = decay_fit(&profile_from_sups(&sups)).unwrap();
        assert_eq!(fit.regime, Regime::Polynomial);
        assert!((fit.alpha.unwrap() - 0.5).abs() < 0.05);
    }

    #[test]
    fn synthetic_logarithmic() {
        let sups: Vec<f64> = (0..20).map(|j| 1.0 / (j as f64).max(1.0)).collect();
        let fit = decay_fit(&profile_from_sups(&sups)).unwrap();
        assert_eq!(fit.regime, Regime::Logarithmic);
        assert!((fit.alpha.unwrap() - 1.0).abs() < 0.1);
    }

    #[test]
    fn constant_profile_has_no_regime() {
        let fit = decay_fit(&profile_from_sups(&[0.3; 16])).unwrap();
        assert_eq!(fit.regime, Regime::None);
        assert!(fit.alpha.is_none());
        assert!(matches!(
            decay_fit(&profile_from_sups(&[0.3; 6])),
            Err(FourierError::InsufficientBands { .. })
        ));
    }

    #[test]
    fn del_examples() {
        let fast: Vec<f64> = (0..16).map(|j| 2f64.powi(-j)).collect();
        assert_eq!(del_criterion_check(&profile_from_sups(&fast), 1.0).unwrap().consistent, Some(true));
        let flat = profile_from_sups(&[0.5; 16]);
        assert_eq!(del_criterion_check(&flat, 1.0).unwrap().consistent, Some(false));
        let short = profile_from_sups(&[0.5; 4]);
        assert_eq!(del_criterion_check(&short, 1.0).unwrap().consistent, None);
    }

    #[test]
    fn cantor_bands_stay_large() {
        let tol = 1e-9;
        let f1 = fourier_exact(&cantor(), &BigRational::from_integer(1.into()), tol, 10_000_000)
            .unwrap()
            .modulus();
        let p = decay_profile(&cantor(), 12, 8, tol, 10_000_000).unwrap();
        for b in &p.bands {
            let has_power_of_three = (0..20).any(|m| {
                let q = 3u64.pow(m);
                q >= b.lo && q < b.hi
            });
            if has_power_of_three {
                assert!(b.sup >= f1 - 2.0 * tol, "band {}", b.j);
            }
        }
    }

    #[test]
    fn dyadic_integers_vanish() {
        let p = decay_profile(&dyadic(), 8, 64, 1e-9, 10_000_000).unwrap();
        assert!(p.bands.iter().all(|b| b.sup <= 1e-9));
    }

    #[test]
    fn grid_contains_multiplicative_points() {
        let g = band_grid(&cantor(), 6, 4);
        assert!(g.contains(&81));
        assert_eq!(&g[..4], &[64, 65, 66, 67]);
    }
}
