//! `F_q(ν) = ∫ e^{2πiqx} dν(x)` from the self-similarity relation
//! `F_q = Σ p_i e^{2πi q t_i} F_{q s_i}`.

use super::{FourierError, FourierValue};
use crate::ifs::SelfSimilarSystem;
use crate::rational::{exp_2pi_i, to_f64};
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::Zero;
use std::collections::HashMap;
use std::f64::consts::PI;

pub const DEFAULT_BUDGET: u64 = 10_000_000;
pub const DEFAULT_TOL: f64 = 1e-9;

struct Evaluator<'a> {
    system: &'a SelfSimilarSystem,
    probs: Vec<f64>,
    midpoint: BigRational,
    width: f64,
    tol: f64,
    budget: u64,
    nodes: u64,
    exhausted: bool,
    memo: HashMap<BigRational, (Complex64, f64)>,
}

impl Evaluator<'_> {
    fn eval(&mut self, q: &BigRational) -> (Complex64, f64) {
        if q.is_zero() {
            return (Complex64::new(1.0, 0.0), 0.0);
        }
        if let Some(&v) = self.memo.get(q) {
            return v;
        }
        self.nodes += 1;
        // ν lives in the hull, so |F_q − e^{2πiqc}| ≤ π|q|·width for the midpoint c.
        let leaf_bound = PI * to_f64(q).abs() * self.width;
        let result = if leaf_bound <= self.tol || self.nodes > self.budget {
            if leaf_bound > self.tol {
                self.exhausted = true;
            }
            let (c, s) = exp_2pi_i(&(q * &self.midpoint));
            (Complex64::new(c, s), leaf_bound.min(2.0))
        } else {
            let mut value = Complex64::new(0.0, 0.0);
            let mut error = 0.0;
            for (i, map) in self.system.maps().iter().enumerate() {
                let (child, child_err) = self.eval(&(q * &map.slope));
                let (c, s) = exp_2pi_i(&(q * &map.offset));
                value += self.probs[i] * Complex64::new(c, s) * child;
                error += self.probs[i] * child_err;
            }
            let rounding = 4.0 * (self.probs.len() + 2) as f64 * f64::EPSILON;
            // |F_q| ≤ 1 caps the distance from any value to the truth.
            (value, (error + rounding).min(1.0 + value.norm()))
        };
        self.memo.insert(q.clone(), result);
        result
    }
}

/// Evaluates `F_q(ν)` to within `tol`, expanding at most `budget` tree nodes.
pub fn fourier_exact(
    system: &SelfSimilarSystem,
    q: &BigRational,
    tol: f64,
    budget: u64,
) -> Result<FourierValue, FourierError> {
    if !(tol > 0.0) {
        return Err(FourierError::InvalidInput(format!("tolerance {tol} must be positive")));
    }
    let mut ev = Evaluator {
        system,
        probs: system.weights().iter().map(to_f64).collect(),
        midpoint: system.hull().midpoint(),
        width: to_f64(&system.hull().width()),
        tol,
        budget,
        nodes: 0,
        exhausted: false,
        memo: HashMap::new(),
    };
    let (v, error) = ev.eval(q);
    let value = FourierValue {
        re: v.re,
        im: v.im,
        error,
        q: q.clone(),
        nodes: ev.nodes,
    };
    if ev.exhausted {
        Err(FourierError::BudgetExceeded(Box::new(value)))
    } else {
        Ok(value)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ifs::presets::{cantor, dyadic};
    use crate::rational::{int, ratio};

    #[test]
    fn zero_frequency_is_total_mass() {
        let v = fourier_exact(&cantor(), &int(0), 1e-9, DEFAULT_BUDGET).unwrap();
        assert_eq!((v.re, v.im, v.error), (1.0, 0.0, 0.0));
    }

    #[test]
    fn dyadic_odd_frequencies_vanish() {
        for q in [1, 3, 5, 99, 999] {
            let v = fourier_exact(&dyadic(), &int(q), 1e-9, DEFAULT_BUDGET).unwrap();
            assert!(v.modulus() <= 1e-9, "q={q}: {}", v.modulus());
        }
    }

    #[test]
    fn cantor_powers_of_three() {
        let tol = 1e-9;
        let f1 = fourier_exact(&cantor(), &int(1), tol, DEFAULT_BUDGET).unwrap().modulus();
        let mut q = int(1);
        for _ in 1..=8 {
            q *= int(3);
            let fq = fourier_exact(&cantor(), &q, tol, DEFAULT_BUDGET).unwrap();
            assert!((fq.modulus() - f1).abs() <= 2.0 * tol);
        }
    }

    #[test]
    fn conjugate_symmetry() {
        for q in [ratio(7, 3), int(-12), ratio(1, 5)] {
            let a = fourier_exact(&cantor(), &q, 1e-10, DEFAULT_BUDGET).unwrap();
            let b = fourier_exact(&cantor(), &-q, 1e-10, DEFAULT_BUDGET).unwrap();
            assert!((a.re - b.re).abs() <= 2e-10 && (a.im + b.im).abs() <= 2e-10);
        }
    }

    #[test]
    fn budget_is_honest() {
        match fourier_exact(&cantor(), &int(1_000_000), 1e-12, 3) {
            Err(FourierError::BudgetExceeded(partial)) => {
                assert!(partial.error > 1e-12 && partial.error <= 2.0);
            }
            other => panic!("expected budget error, got {other:?}"),
        }
    }
}
