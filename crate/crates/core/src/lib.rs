//! Bayesian wavelet shrinkage under asymmetric mixture priors.
//!
//! Each empirical wavelet coefficient `d = theta + eps` is replaced by the
//! posterior mean of `theta` under a prior that mixes a point mass at zero
//! with an asymmetric density (beta, Kumaraswamy, triangular or skew normal).
//! The crate also carries the pieces needed to study those rules: frequentist
//! and Bayes risks, soft-thresholding baselines, and a Monte Carlo harness
//! with the Donoho-Johnstone test functions.

pub mod baselines;
pub mod error;
pub mod numeric;
pub mod priors;
pub mod risk;
pub mod shrinkage;
pub mod sim;
pub mod wavelet;

pub use error::{Result, ShrinkError};
pub use priors::{AsymmetricPrior, MixturePrior};
pub use wavelet::{dwt, idwt, Signal, WaveletBasis, WaveletDecomposition};
