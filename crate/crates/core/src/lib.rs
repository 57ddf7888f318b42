//! Detection-performance analysis for grant-free uplink access with a
//! large antenna array.
//!
//! Active users send a Zadoff-Chu pilot; the base station correlates the
//! received pilot block with each user's sequence and declares the user active
//! when the correlation energy exceeds a Neyman-Pearson threshold set for a
//! target detection probability. This crate computes that threshold, the
//! false-alarm probability it implies, the largest schedulable group, and
//! checks all of it against Monte Carlo simulation.

// Reference constants are quoted at the precision they were computed to.
#![allow(clippy::excessive_precision)]

pub mod detector;
pub mod error;
pub mod montecarlo;
pub mod pilot;
pub mod probstat;
pub mod runner;

pub use error::{Error, Result};

/// Formats a double with 17 significant digits, the precision used in every CSV we emit.
pub fn fmt_f64(x: f64) -> String {
    // canonical zero, so "-0" never reaches a file
    let x = if x == 0.0 { 0.0 } else { x };
    format!("{x:.16e}")
}
