use serde::Serialize;

use super::{build_statistic_model, StatisticModel, SystemConfig};
use crate::error::{Error, Result};
use crate::probstat::CompensatedSum;

const MAX_BISECTIONS: usize = 200;
/// Acceptable gap between the achieved and the allowed miss probability.
const MISS_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, Serialize)]
pub struct ThresholdResult {
    pub omega: f64,
    pub achieved_miss: f64,
    pub analytic_pfa: f64,
    /// `K_r` of the probe the threshold was solved for.
    pub probe_group_size: usize,
    pub config: SystemConfig,
}

fn check_omega(omega: f64) -> Result<()> {
    if omega.is_nan() || omega < 0.0 {
        return Err(Error::domain(format!(
            "threshold {omega} must be non-negative"
        )));
    }
    Ok(())
}

/// `P(Z ≤ Ω | probe active)`.
pub fn miss_probability(omega: f64, model: &StatisticModel) -> Result<f64> {
    check_omega(omega)?;
    let mut acc = CompensatedSum::new();
    for (q, w) in model.significant_components() {
        acc.add(w * model.unit_tails(omega / model.var_active(q))?.0);
    }
    Ok(acc.value().clamp(0.0, 1.0))
}

/// `P(Z > Ω | probe idle)`.
pub fn false_alarm_probability(omega: f64, model: &StatisticModel) -> Result<f64> {
    check_omega(omega)?;
    let mut acc = CompensatedSum::new();
    for (q, w) in model.significant_components() {
        acc.add(w * model.unit_tails(omega / model.var_idle(q))?.1);
    }
    Ok(acc.value().clamp(0.0, 1.0))
}

/// Largest `Ω` with `P(Z ≤ Ω | active) ≤ 1 − P_D`, by bisection.
///
/// The bracket is narrowed until it cannot shrink further, and the lower end
/// is returned, so the constraint holds at `Ω` and any relative increase of
/// `Ω` beyond rounding breaks it.
pub fn solve_threshold(config: &SystemConfig, group_size: usize) -> Result<ThresholdResult> {
    let model = build_statistic_model(config, group_size)?;
    let target = 1.0 - config.target_detection;
    let miss = |omega: f64| miss_probability(omega, &model);

    let m = model.antennas() as f64;
    let mut lo = 0.0;
    let mut hi = model.var_active(model.max_interferers()) * (2.0 * m + 20.0 * m.sqrt());
    if miss(lo)? > target {
        return Err(Error::Internal(format!(
            "no threshold meets P_D = {}: miss probability at zero is already {}",
            config.target_detection,
            miss(lo)?
        )));
    }
    if miss(hi)? <= target {
        return Err(Error::Internal(format!(
            "threshold bracket [0, {hi}] does not straddle the target miss probability"
        )));
    }
    for _ in 0..MAX_BISECTIONS {
        let mid = lo + 0.5 * (hi - lo);
        if mid <= lo || mid >= hi {
            break;
        }
        if miss(mid)? <= target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let achieved_miss = miss(lo)?;
    if (achieved_miss - target).abs() > MISS_TOLERANCE {
        return Err(Error::Internal(format!(
            "bisection stalled at miss {achieved_miss}, target {target}"
        )));
    }
    Ok(ThresholdResult {
        omega: lo,
        achieved_miss,
        analytic_pfa: false_alarm_probability(lo, &model)?,
        probe_group_size: group_size,
        config: config.clone(),
    })
}
