use super::FourierValue;
use crate::rational::unit_phase;
use crate::sampling::SequenceSample;
use num_bigint::BigInt;
use num_rational::BigRational;
use std::f64::consts::PI;

/// `(1/N) Σ e^{2πi q x_n}` over a sample, with the error induced by the
/// per-value accuracy of the sample.
pub fn fourier_empirical(sample: &SequenceSample, q: i64) -> FourierValue {
    let n = sample.len().max(1) as f64;
    let (mut re, mut im) = (0.0, 0.0);
    for &x in &sample.values {
        let (c, s) = unit_phase(product_mod_one(q, x));
        re += c;
        im += s;
    }
    let mean_err = sample.errors.iter().sum::<f64>() / n;
    let rounding = 4.0 * f64::EPSILON * (1.0 + (q as f64).abs());
    FourierValue {
        re: re / n,
        im: im / n,
        error: 2.0 * PI * (q as f64).abs() * mean_err + rounding,
        q: BigRational::from_integer(BigInt::from(q)),
        nodes: 0,
    }
}

/// `q·x mod 1` for `x ∈ [0, 1)`, computed in 64-bit fixed point so large
/// `q` loses nothing beyond `|q|·2^-64`.
pub(crate) fn product_mod_one(q: i64, x: f64) -> f64 {
    let m = (x * 18_446_744_073_709_551_616.0) as u64;
    let r = (q as u64).wrapping_mul(m);
    r as f64 / 18_446_744_073_709_551_616.0
}
