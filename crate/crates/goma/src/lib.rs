//! Goal-oriented multiple access over a slotted collision channel.
//!
//! A fleet of sensors shares one channel: a slot with a single transmitter
//! delivers that sensor's value, a slot with several delivers nothing, and
//! every attempt costs `psi`. Each sensor sees only its own current value,
//! so a strategy is a per-node transmission threshold. This crate computes
//! those thresholds three ways and cross-checks them:
//!
//! * [`libra`] — closed-form best responses iterated to a Nash equilibrium,
//!   seeded by an equal-value search ([`baseline`]).
//! * [`beta`] — an online learner that reaches the same operating point from
//!   channel feedback alone, with no knowledge of the value distributions.
//! * [`oracle`] + [`channel`] — brute-force enumeration and Monte Carlo
//!   simulation used to verify both.
//!
//! [`basins`] maps which equilibrium the best-response dynamics reach from
//! each starting point, and [`experiments`] packages the standard studies
//! behind the `goma` binary.

pub mod baseline;
pub mod basins;
pub mod beta;
pub mod channel;
pub mod dists;
mod error;
pub mod experiments;
pub mod libra;
pub mod oracle;
pub mod rng;
pub mod strategy;

pub use error::{GomaError, Result};
