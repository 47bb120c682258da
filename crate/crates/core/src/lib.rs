//! Computational experiments on pointwise normality of self-similar measures
//! on the line.

pub mod algebra;
pub mod cli;
pub mod fourier;
pub mod ifs;
pub mod martingale;
pub mod rational;
pub mod sampling;
pub mod stats;
