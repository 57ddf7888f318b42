use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::pilot::{is_prime, pilot_capacity, roots_needed};

/// Distribution used for the `2M`-DoF statistic in the analytic formulas.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TailModel {
    /// Central-limit approximation `N(2M, 4M)`.
    #[default]
    Gaussian,
    ExactChiSquare,
}

impl TailModel {
    pub fn as_str(&self) -> &'static str {
        match self {
            TailModel::Gaussian => "gaussian",
            TailModel::ExactChiSquare => "exact_chi_square",
        }
    }
}

/// Power gain of one cross-root interferer after despreading.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CrossCorrModel {
    /// `c = 1`: unit cross-correlation magnitude.
    #[default]
    PaperUnit,
    /// `c = L`: what unit-modulus Zadoff-Chu pilots actually produce.
    TrueZc,
}

impl CrossCorrModel {
    pub fn as_str(&self) -> &'static str {
        match self {
            CrossCorrModel::PaperUnit => "paper_unit",
            CrossCorrModel::TrueZc => "true_zc",
        }
    }
}

/// Which root group the probe user belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ProbeGroup {
    /// Smallest group, i.e. the most cross-root interferers.
    #[default]
    Smallest,
    Largest,
}

impl ProbeGroup {
    pub fn as_str(&self) -> &'static str {
        match self {
            ProbeGroup::Smallest => "smallest",
            ProbeGroup::Largest => "largest",
        }
    }
}

fn default_snr_db() -> f64 {
    15.0
}

/// Scalar model parameters. Field names in JSON match the config-file schema.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SystemConfig {
    #[serde(rename = "antennas_M")]
    pub antennas: usize,
    #[serde(rename = "pilot_length_L")]
    pub pilot_length: usize,
    #[serde(rename = "user_count_K")]
    pub users: usize,
    #[serde(rename = "arrival_rate_PA")]
    pub arrival_rate: f64,
    #[serde(rename = "target_detection_PD")]
    pub target_detection: f64,
    #[serde(rename = "outage_PO")]
    pub outage: f64,
    #[serde(default = "default_snr_db")]
    pub pilot_snr_db: f64,
    /// Per-symbol noise-plus-interference variance; `None` means `L`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub noise_per_symbol_variance: Option<f64>,
    #[serde(default)]
    pub tail_model: TailModel,
    #[serde(default)]
    pub crosscorr_model: CrossCorrModel,
    #[serde(default)]
    pub probe_group: ProbeGroup,
}

impl SystemConfig {
    /// Config with defaults: 15 dB pilot SNR, noise variance `L`, Gaussian
    /// tail, unit cross-correlation, smallest probe group.
    pub fn new(
        antennas: usize,
        pilot_length: usize,
        users: usize,
        arrival_rate: f64,
        target_detection: f64,
        outage: f64,
    ) -> Self {
        Self {
            antennas,
            pilot_length,
            users,
            arrival_rate,
            target_detection,
            outage,
            pilot_snr_db: default_snr_db(),
            noise_per_symbol_variance: None,
            tail_model: TailModel::default(),
            crosscorr_model: CrossCorrModel::default(),
            probe_group: ProbeGroup::default(),
        }
    }

    pub fn with_tail(mut self, tail: TailModel) -> Self {
        self.tail_model = tail;
        self
    }

    pub fn with_crosscorr(mut self, model: CrossCorrModel) -> Self {
        self.crosscorr_model = model;
        self
    }

    pub fn with_snr_db(mut self, snr_db: f64) -> Self {
        self.pilot_snr_db = snr_db;
        self
    }

    pub fn with_noise_variance(mut self, variance: f64) -> Self {
        self.noise_per_symbol_variance = Some(variance);
        self
    }

    pub fn with_probe_group(mut self, group: ProbeGroup) -> Self {
        self.probe_group = group;
        self
    }

    pub fn with_users(mut self, users: usize) -> Self {
        self.users = users;
        self
    }

    pub fn noise_variance(&self) -> f64 {
        self.noise_per_symbol_variance
            .unwrap_or(self.pilot_length as f64)
    }

    /// Common received pilot power `10^(snr/10)·σ_v²`.
    pub fn pilot_power(&self) -> f64 {
        10f64.powf(self.pilot_snr_db / 10.0) * self.noise_variance()
    }

    /// Despread noise power `‖ψ‖²·σ_v² = L·σ_v²`.
    pub fn despread_noise(&self) -> f64 {
        self.pilot_length as f64 * self.noise_variance()
    }

    pub fn crosscorr_gain(&self) -> f64 {
        match self.crosscorr_model {
            CrossCorrModel::PaperUnit => 1.0,
            CrossCorrModel::TrueZc => self.pilot_length as f64,
        }
    }

    pub fn pilot_capacity(&self) -> usize {
        pilot_capacity(self.pilot_length)
    }

    /// `K_r` for the configured probe group.
    pub fn probe_group_size(&self) -> usize {
        let roots = roots_needed(self.users, self.pilot_length).max(1);
        match self.probe_group {
            ProbeGroup::Smallest => self.users / roots,
            ProbeGroup::Largest => self.users.div_ceil(roots),
        }
    }

    /// Checks every invariant; errors name the offending key.
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::Config(msg));
        if self.antennas == 0 {
            return bad("antennas_M must be at least 1".into());
        }
        if !is_prime(self.pilot_length) {
            return bad("pilot_length_L must be prime".into());
        }
        if self.users == 0 {
            return bad("user_count_K must be at least 1".into());
        }
        let capacity = self.pilot_capacity();
        if self.users > capacity {
            return bad(format!("user_count_K: K exceeds L²−L = {capacity}"));
        }
        if !(0.0..=1.0).contains(&self.arrival_rate) {
            return bad(format!(
                "arrival_rate_PA must lie in [0, 1], got {}",
                self.arrival_rate
            ));
        }
        if !(self.target_detection > 0.0 && self.target_detection < 1.0) {
            return bad(format!(
                "target_detection_PD must lie in (0, 1), got {}",
                self.target_detection
            ));
        }
        if !(self.outage > 0.0 && self.outage < 1.0) {
            return bad(format!("outage_PO must lie in (0, 1), got {}", self.outage));
        }
        if !self.pilot_snr_db.is_finite() {
            return bad("pilot_snr_db must be finite".into());
        }
        let noise = self.noise_variance();
        if !(noise > 0.0 && noise.is_finite()) {
            return bad(format!(
                "noise_per_symbol_variance must be positive, got {noise}"
            ));
        }
        if !(self.pilot_power() > 0.0 && self.pilot_power().is_finite()) {
            return bad("pilot_snr_db yields a non-positive pilot power".into());
        }
        Ok(())
    }
}
