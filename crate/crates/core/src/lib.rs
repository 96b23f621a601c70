//! Sub-mixed fractional Brownian motion and its relatives.
//!
//! The sub-mixed fractional Brownian motion (smfBm) of parameters `(a, b, H)`
//! is `S_t = a ξ_t + b ξ^H_t`, where `ξ` is a Brownian motion and `ξ^H` an
//! independent sub-fractional Brownian motion. This crate provides
//!
//! * closed-form covariance kernels for Bm, fBm, sfBm, mfBm and smfBm
//!   ([`kernels`]),
//! * second moments, bounds and correlations of increments, including the
//!   mfBm-vs-smfBm comparison quantities ([`increments`]),
//! * exact Gaussian path sampling through covariance factorization, with a
//!   direct and a constructive route ([`simulate`]),
//! * Monte Carlo estimators that close the loop against the formulas
//!   ([`estimators`]),
//! * the semimartingale diagnostics: Markov defect, expected quadratic
//!   variation, quasi-martingale sums, conditional-L² sums and the final
//!   classification ([`diagnostics`]).

pub mod diagnostics;
pub mod error;
pub mod estimators;
pub mod increments;
pub mod kernels;
pub mod linalg;
mod powers;
pub mod report;
pub mod simulate;

pub use error::{Error, Result};
pub use kernels::{CovarianceMatrix, Hurst, MixCoeffs, ProcessKind, ProcessSpec, TimeGrid};
