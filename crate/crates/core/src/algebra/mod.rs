//! Arithmetic classifiers: log-commensurability, Pisot detection, and the
//! obstruction form for pointwise absolute normality.

pub mod commensurability;
pub mod obstruction;
pub mod pisot;
pub mod poly;

pub use commensurability::{log_commensurable, CommensurabilityResult};
pub use obstruction::{
    classify_obstruction, classify_obstruction_with, incommensurable_witness, translation_form, ObstructionReport,
    Verdict,
};
pub use pisot::{is_pisot, PisotReport};
pub use poly::{IntPoly, RealAlgebraic};

use crate::ifs::IfsError;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum AlgebraError {
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("{0} is not monic, so its roots are not algebraic integers")]
    NotAlgebraicInteger(String),
    #[error("{0} is reducible over the rationals")]
    ReduciblePolynomial(String),
    #[error("root isolation for {0} ran out of precision")]
    PrecisionExhausted(String),
    #[error(transparent)]
    System(#[from] IfsError),
}
