//! Fourier transforms of self-similar measures and of empirical samples.

pub mod empirical;
pub mod exact;
pub mod profile;

pub use empirical::fourier_empirical;
pub use exact::{fourier_exact, DEFAULT_BUDGET, DEFAULT_TOL};
pub use profile::{
    band_grid, decay_fit, decay_profile, del_criterion_check, profile_from_sups, DecayFit, DecayProfile, DelCheck,
    Regime,
};

use num_rational::BigRational;
use serde::Serialize;

/// A complex Fourier coefficient and a bound on its distance to the true value.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FourierValue {
    pub re: f64,
    pub im: f64,
    pub error: f64,
    #[serde(serialize_with = "crate::rational::serde_str::serialize")]
    pub q: BigRational,
    /// Recursion nodes expanded (zero for empirical values).
    pub nodes: u64,
}

impl FourierValue {
    pub fn modulus(&self) -> f64 {
        self.re.hypot(self.im)
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum FourierError {
    #[error("node budget exhausted; partial value has error bound {}", .0.error)]
    BudgetExceeded(Box<FourierValue>),
    #[error("need at least {need} usable bands, have {have}")]
    InsufficientBands { have: usize, need: usize },
    #[error("invalid input: {0}")]
    InvalidInput(String),
}
