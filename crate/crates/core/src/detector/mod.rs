//! Correlation-detector analysis.
//!
//! Conditioned on the number `q` of active users whose pilots sit on a
//! different root than the probe, the probe statistic `Z = ‖Yψ‖²` is a scaled
//! chi-square with `2M` degrees of freedom:
//!
//! ```text
//! active: Z ~ σ²_a(q)·χ²_{2M},  σ²_a(q) = (L·p + c·q·p + N₀)/2
//! idle:   Z ~ σ²_i(q)·χ²_{2M},  σ²_i(q) = (c·q·p + N₀)/2
//! ```
//!
//! with `p` the common received pilot power, `N₀ = L·σ_v²` the despread noise
//! power and `c` the cross-root interference gain. `q` is binomial with
//! `K − K_r` trials, `K_r` being the size of the probe's root group.
//!
//! The detector declares "active" when `Z > Ω`. A miss is therefore the lower
//! tail under the active hypothesis and a false alarm the upper tail under the
//! idle hypothesis. The Neyman-Pearson threshold is the largest `Ω` whose miss
//! probability stays within `1 − P_D`.

mod config;
mod model;
mod scheduling;
mod threshold;

pub use config::{CrossCorrModel, ProbeGroup, SystemConfig, TailModel};
pub use model::{build_statistic_model, StatisticModel};
pub use scheduling::{max_scheduling_size, min_pilot_length};
pub use threshold::{false_alarm_probability, miss_probability, solve_threshold, ThresholdResult};
