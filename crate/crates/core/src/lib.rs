//! Finite-blocklength reliability of single-RF-chain receive diversity.
//!
//! The crate evaluates the average error probability of Selection Combining
//! (SC) and Switch-and-Stay Combining (SSC) when a message of `k` bits must be
//! delivered within `u` channel uses, and every antenna switch, SNR
//! measurement and feedback message eats into that budget.
//!
//! - [`numerics`]: Gaussian tail, incomplete gamma, adaptive quadrature and a
//!   1-D minimizer.
//! - [`fading`]: Nakagami-m SNR statistics and order statistics of the best branch.
//! - [`fbcode`]: normal-approximation error of a short code and its inversion.
//! - [`timing`]: channel-use ledger of the scanning protocol.
//! - [`schemes`]: analytical SC/SSC evaluators and threshold strategies.
//! - [`montecarlo`]: protocol-level simulation used to cross-check the analysis.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod fading;
pub mod fbcode;
pub mod montecarlo;
pub mod numerics;
pub mod schemes;
pub mod timing;

pub use error::{Error, Result};
pub use fading::ChannelModel;
pub use fbcode::CodeSpec;
pub use montecarlo::{McConfig, McEstimate};
pub use schemes::{Scheme, SchemeEvaluation, ThresholdStrategy};
pub use timing::ProtocolBudget;

/// Converts a dB value to a linear power ratio.
pub fn db_to_linear(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

/// Converts a linear power ratio to dB. Infinity maps to infinity.
pub fn linear_to_db(x: f64) -> f64 {
    10.0 * x.log10()
}
