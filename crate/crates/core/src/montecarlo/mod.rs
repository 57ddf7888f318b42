//! Empirical detection and false-alarm rates.
//!
//! Two modes. `ModelFaithful` draws the probe statistic straight from the
//! conditional chi-square mixture the analytics assume. `Waveform` builds the
//! received pilot block from real Zadoff-Chu pilots, Rayleigh channels and
//! white noise, and correlates it with the probe's pilot; it keeps the true
//! cross-root gain and the cross terms the mixture drops.
//!
//! Detection and false-alarm trials run in separate conditioned streams: the
//! first half-plus-one of the budget forces the probe active, the rest idle.

mod model;
mod rng;
mod waveform;

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::detector::{build_statistic_model, ProbeGroup, SystemConfig};
use crate::error::{Error, Result};
use crate::pilot::{assign_pilots, PilotAssignment};

pub use model::{draw_statistic_model_faithful, ModelSampler};
pub use rng::{standard_complex_normal, trial_stream, Conditioning, RNG_ALGORITHM};
pub use waveform::{sufficient_statistics, synthesize_received_pilot, ReceivedPilot, Synthesis};

/// Two-sided 95% normal quantile.
const Z95: f64 = 1.959963984540054;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SimulationMode {
    #[default]
    ModelFaithful,
    Waveform,
}

impl SimulationMode {
    pub fn as_str(&self) -> &'static str {
        match self {
            SimulationMode::ModelFaithful => "model_faithful",
            SimulationMode::Waveform => "waveform",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrialPlan {
    pub config: SystemConfig,
    pub mode: SimulationMode,
    /// Total budget, split between the active and idle conditionings.
    pub trials: u64,
    pub seed: u64,
    /// 1-based probe user; `None` picks one from the config's probe group.
    pub probe_user: Option<usize>,
}

impl TrialPlan {
    pub fn new(config: SystemConfig, mode: SimulationMode, trials: u64, seed: u64) -> Self {
        Self {
            config,
            mode,
            trials,
            seed,
            probe_user: None,
        }
    }

    pub fn with_probe_user(mut self, user: usize) -> Self {
        self.probe_user = Some(user);
        self
    }

    /// `(probe user, size of its root group)` for this plan's config.
    pub fn probe(&self) -> Result<(usize, usize)> {
        let assignment = assign_pilots(self.config.users, self.config.pilot_length)?;
        let user = resolve_probe(&self.config, &assignment, self.probe_user)?;
        Ok((user, assignment.group_size_of(user)?))
    }

    pub fn pd_trials(&self) -> u64 {
        self.trials - self.trials / 2
    }

    pub fn pfa_trials(&self) -> u64 {
        self.trials / 2
    }
}

/// Wilson score interval at 95%. An empty sample gives `[0, 1]`.
pub fn wilson_interval(successes: u64, trials: u64) -> (f64, f64) {
    if trials == 0 {
        return (0.0, 1.0);
    }
    let n = trials as f64;
    let p = successes as f64 / n;
    let z2 = Z95 * Z95;
    let denom = 1.0 + z2 / n;
    let centre = (p + z2 / (2.0 * n)) / denom;
    let half = Z95 * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt() / denom;
    // Rounding can push the ends a hair past the point estimate.
    ((centre - half).clamp(0.0, p), (centre + half).clamp(p, 1.0))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrialReport {
    pub omega: f64,
    pub empirical_pd: f64,
    pub empirical_pfa: f64,
    pub detections: u64,
    pub false_alarms: u64,
    pub pd_trials: u64,
    pub pfa_trials: u64,
    pub wilson_ci_pd: (f64, f64),
    pub wilson_ci_pfa: (f64, f64),
    pub seed: u64,
    pub mode: SimulationMode,
    pub rng_algorithm: &'static str,
    pub probe_user: usize,
    pub probe_group_size: usize,
}

fn rate(hits: u64, n: u64) -> f64 {
    if n == 0 {
        0.0
    } else {
        hits as f64 / n as f64
    }
}

fn resolve_probe(
    config: &SystemConfig,
    assignment: &PilotAssignment,
    user: Option<usize>,
) -> Result<usize> {
    let user = user.unwrap_or(match config.probe_group {
        ProbeGroup::Smallest => assignment.worst_case_user(),
        ProbeGroup::Largest => assignment.best_case_user(),
    });
    if user == 0 || user > config.users {
        return Err(Error::invalid(format!(
            "probe user {user} outside [1, {}]",
            config.users
        )));
    }
    Ok(user)
}

/// Runs the plan and counts `Z_probe > Ω` in each conditioning.
///
/// Trial `i` of each conditioning owns its own random stream, so the report
/// depends only on `(plan, omega)`, never on the thread count.
pub fn run_trials(plan: &TrialPlan, omega: f64) -> Result<TrialReport> {
    if plan.trials == 0 {
        return Err(Error::invalid("trial count must be at least 1"));
    }
    if omega.is_nan() || omega < 0.0 {
        return Err(Error::invalid(format!(
            "threshold {omega} must be non-negative"
        )));
    }
    let config = &plan.config;
    config.validate()?;
    let assignment = assign_pilots(config.users, config.pilot_length)?;
    let probe = resolve_probe(config, &assignment, plan.probe_user)?;
    let group_size = assignment.group_size_of(probe)?;

    let count = |conditioning: Conditioning,
                 n: u64,
                 draw: &(dyn Fn(&mut rand_chacha::ChaCha8Rng, bool) -> Result<f64> + Sync)|
     -> Result<u64> {
        let active = conditioning == Conditioning::ProbeActive;
        (0..n)
            .into_par_iter()
            .map(|i| {
                let mut rng = trial_stream(plan.seed, conditioning, i);
                Ok(u64::from(draw(&mut rng, active)? > omega))
            })
            .try_reduce(|| 0, |a, b| Ok(a + b))
    };

    let (detections, false_alarms) = match plan.mode {
        SimulationMode::ModelFaithful => {
            let model = build_statistic_model(config, group_size)?;
            let sampler = ModelSampler::new(&model)?;
            let draw =
                |rng: &mut rand_chacha::ChaCha8Rng, active: bool| Ok(sampler.draw(rng, active));
            (
                count(Conditioning::ProbeActive, plan.pd_trials(), &draw)?,
                count(Conditioning::ProbeIdle, plan.pfa_trials(), &draw)?,
            )
        }
        SimulationMode::Waveform => {
            let pilots = assignment.sequences();
            let synthesis = Synthesis::from_config(config);
            let probe_pilot = &pilots[probe - 1];
            let draw = |rng: &mut rand_chacha::ChaCha8Rng, active: bool| {
                let activations: Vec<bool> = (1..=config.users)
                    .map(|j| {
                        let arrived = rng.random::<f64>() < config.arrival_rate;
                        if j == probe {
                            active
                        } else {
                            arrived
                        }
                    })
                    .collect();
                synthesis
                    .received(rng, &pilots, &activations)?
                    .correlate_energy(probe_pilot)
            };
            (
                count(Conditioning::ProbeActive, plan.pd_trials(), &draw)?,
                count(Conditioning::ProbeIdle, plan.pfa_trials(), &draw)?,
            )
        }
    };

    Ok(TrialReport {
        omega,
        empirical_pd: rate(detections, plan.pd_trials()),
        empirical_pfa: rate(false_alarms, plan.pfa_trials()),
        detections,
        false_alarms,
        pd_trials: plan.pd_trials(),
        pfa_trials: plan.pfa_trials(),
        wilson_ci_pd: wilson_interval(detections, plan.pd_trials()),
        wilson_ci_pfa: wilson_interval(false_alarms, plan.pfa_trials()),
        seed: plan.seed,
        mode: plan.mode,
        rng_algorithm: RNG_ALGORITHM,
        probe_user: probe,
        probe_group_size: group_size,
    })
}
