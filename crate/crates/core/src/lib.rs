//! Second-order rate regions of the Gaussian multiple-access channel with
//! degraded message sets, and Monte Carlo evaluation of the accompanying
//! finite-blocklength converse and achievability bounds.
//!
//! All logarithms are natural; rates are in nats per channel use.

// Negated comparisons are used deliberately so that NaN fails validation.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod gaussian;
pub mod quantities;
pub mod regions;
pub mod simulator;

pub use error::{Error, Result};
pub use quantities::{ChannelParams, CorrelationPoint};
