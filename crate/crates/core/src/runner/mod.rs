//! Parameter sweeps: threshold and false-alarm rate over a grid of antenna
//! counts or arrival rates, with optional Monte Carlo columns.

mod io;
mod presets;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::detector::{max_scheduling_size, solve_threshold, SystemConfig};
use crate::error::{Error, Result};
use crate::montecarlo::{run_trials, SimulationMode, TrialPlan};

pub use io::{emit_csv, load_sweep_spec, load_system_config, write_csv, CSV_HEADER};
pub use presets::{fig2_spec, fig3_spec, PRESET_PD_TARGETS};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SweepAxis {
    #[serde(rename = "antennas_M")]
    Antennas,
    #[serde(rename = "arrival_rate_PA")]
    ArrivalRate,
}

fn default_true() -> bool {
    true
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSpec {
    pub axis: SweepAxis,
    pub grid: Vec<f64>,
    /// Values for every parameter the axis and targets do not set. With
    /// `couple_kmax`, its `user_count_K` is replaced at each point.
    pub fixed: SystemConfig,
    pub pd_targets: Vec<f64>,
    #[serde(default = "default_true")]
    pub couple_kmax: bool,
    /// Monte Carlo budget per row; 0 skips simulation.
    #[serde(default)]
    pub mc_trials: u64,
    #[serde(default)]
    pub mc_mode: SimulationMode,
    #[serde(default)]
    pub seed: u64,
}

impl SweepSpec {
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::Config(msg));
        if self.grid.is_empty() {
            return bad("grid must not be empty".into());
        }
        if !self.grid.windows(2).all(|w| w[0] < w[1]) {
            return bad("grid must be strictly increasing".into());
        }
        for &x in &self.grid {
            match self.axis {
                SweepAxis::Antennas if !(x >= 1.0 && x.fract() == 0.0 && x <= u32::MAX as f64) => {
                    return bad(format!("grid: {x} is not a valid antennas_M"));
                }
                SweepAxis::ArrivalRate if !(0.0..=1.0).contains(&x) => {
                    return bad(format!("grid: {x} is not a valid arrival_rate_PA"));
                }
                _ => {}
            }
        }
        if self.pd_targets.is_empty() {
            return bad("pd_targets must not be empty".into());
        }
        if let Some(p) = self.pd_targets.iter().find(|&&p| !(p > 0.0 && p < 1.0)) {
            return bad(format!("pd_targets: {p} outside (0, 1)"));
        }
        // Check what the axis does not override by materializing the first point.
        let mut probe = self.point(self.grid[0]);
        probe.target_detection = self.pd_targets[0];
        if self.couple_kmax {
            probe.users = 1;
            if self.grid.iter().any(|&x| self.point(x).arrival_rate == 0.0) {
                return bad("arrival_rate_PA must be positive when couple_kmax is set".into());
            }
        }
        probe.validate()
    }

    fn point(&self, x: f64) -> SystemConfig {
        let mut config = self.fixed.clone();
        match self.axis {
            SweepAxis::Antennas => config.antennas = x as usize,
            SweepAxis::ArrivalRate => config.arrival_rate = x,
        }
        config
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum RowStatus {
    Ok,
    /// `K_max` exceeded the pilot pool and `K` was capped at `L² − L`.
    KmaxCapped,
    /// No user group meets the outage limit; no threshold was solved.
    KmaxInfeasible,
}

impl RowStatus {
    pub fn as_str(&self) -> &'static str {
        match self {
            RowStatus::Ok => "ok",
            RowStatus::KmaxCapped => "kmax_capped",
            RowStatus::KmaxInfeasible => "kmax_infeasible",
        }
    }
}

/// Empirical columns of a row.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct McColumns {
    pub pd: f64,
    pub pd_ci: (f64, f64),
    pub pfa: f64,
    pub pfa_ci: (f64, f64),
    pub trials: u64,
    pub mode: SimulationMode,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRow {
    pub status: RowStatus,
    pub config: SystemConfig,
    /// `K_r` of the probe user.
    pub probe_group_size: usize,
    pub kmax: Option<usize>,
    pub omega: Option<f64>,
    pub miss: Option<f64>,
    pub pfa_analytic: Option<f64>,
    pub mc: Option<McColumns>,
}

/// One grid point: `(status, config with K set, kmax)`.
fn resolve_point(spec: &SweepSpec, x: f64) -> Result<(RowStatus, SystemConfig, Option<usize>)> {
    let mut config = spec.point(x);
    let kmax = if config.arrival_rate > 0.0 {
        Some(max_scheduling_size(
            config.antennas,
            config.arrival_rate,
            config.outage,
        )?)
    } else {
        None
    };
    let mut status = RowStatus::Ok;
    if spec.couple_kmax {
        let k = kmax.unwrap_or(0);
        let capacity = config.pilot_capacity();
        if k == 0 {
            status = RowStatus::KmaxInfeasible;
        } else if k > capacity {
            status = RowStatus::KmaxCapped;
        }
        config.users = k.min(capacity);
    }
    Ok((status, config, kmax))
}

fn solve_row(
    spec: &SweepSpec,
    index: u64,
    point: &(RowStatus, SystemConfig, Option<usize>),
    pd: f64,
) -> Result<SweepRow> {
    let (status, base, kmax) = point;
    let mut config = base.clone();
    config.target_detection = pd;
    let mut row = SweepRow {
        status: *status,
        probe_group_size: 0,
        kmax: *kmax,
        omega: None,
        miss: None,
        pfa_analytic: None,
        mc: None,
        config,
    };
    if row.status == RowStatus::KmaxInfeasible {
        return Ok(row);
    }
    let group = row.config.probe_group_size();
    let solved = solve_threshold(&row.config, group)?;
    row.probe_group_size = group;
    row.omega = Some(solved.omega);
    row.miss = Some(solved.achieved_miss);
    row.pfa_analytic = Some(solved.analytic_pfa);
    if spec.mc_trials > 0 {
        let seed = spec.seed.wrapping_add(index);
        let plan = TrialPlan::new(row.config.clone(), spec.mc_mode, spec.mc_trials, seed);
        let r = run_trials(&plan, solved.omega)?;
        row.mc = Some(McColumns {
            pd: r.empirical_pd,
            pd_ci: r.wilson_ci_pd,
            pfa: r.empirical_pfa,
            pfa_ci: r.wilson_ci_pfa,
            trials: spec.mc_trials,
            mode: spec.mc_mode,
            seed,
        });
    }
    Ok(row)
}

/// Runs the sweep. Rows come out grid-major, then in `pd_targets` order; row
/// `i` simulates with seed `spec.seed + i`.
pub fn run_sweep(spec: &SweepSpec) -> Result<Vec<SweepRow>> {
    spec.validate()?;
    let points = spec
        .grid
        .par_iter()
        .map(|&x| resolve_point(spec, x))
        .collect::<Result<Vec<_>>>()?;
    for (point, &x) in points.iter().zip(&spec.grid) {
        if point.0 == RowStatus::KmaxInfeasible {
            log::warn!("grid point {x}: no feasible scheduling size");
        }
    }
    let targets = spec.pd_targets.len();
    (0..points.len() * targets)
        .into_par_iter()
        .map(|i| {
            solve_row(
                spec,
                i as u64,
                &points[i / targets],
                spec.pd_targets[i % targets],
            )
        })
        .collect()
}
