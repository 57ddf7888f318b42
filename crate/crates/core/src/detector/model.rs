use super::{SystemConfig, TailModel};
use crate::error::{Error, Result};
use crate::probstat::{regularized_gamma, upper_tail, BinomialLaw};

/// Mixture components lighter than this are skipped during evaluation. The
/// dropped mass is at most `(K − K_r)·1e−18`.
const WEIGHT_FLOOR: f64 = 1e-18;

/// Conditional law of the probe statistic: a binomial mixture over the
/// cross-root interferer count `q` of scaled `χ²_{2M}` variables.
#[derive(Debug, Clone)]
pub struct StatisticModel {
    antennas: usize,
    pilot_length: usize,
    pilot_power: f64,
    despread_noise: f64,
    crosscorr_gain: f64,
    tail: TailModel,
    weights: Vec<f64>,
    support: (usize, usize),
    interferer_law: BinomialLaw,
}

/// Builds the mixture for a probe whose root group holds `group_size` users.
pub fn build_statistic_model(config: &SystemConfig, group_size: usize) -> Result<StatisticModel> {
    config.validate()?;
    if group_size == 0 || group_size > config.users {
        return Err(Error::invalid(format!(
            "probe root group size {group_size} outside [1, {}]",
            config.users
        )));
    }
    let law = BinomialLaw::new((config.users - group_size) as u64, config.arrival_rate)?;
    let weights: Vec<f64> = (0..=law.trials()).map(|q| law.pmf(q)).collect();
    let lo = weights.iter().position(|&w| w >= WEIGHT_FLOOR).unwrap_or(0);
    let hi = weights
        .iter()
        .rposition(|&w| w >= WEIGHT_FLOOR)
        .unwrap_or(weights.len() - 1);
    Ok(StatisticModel {
        antennas: config.antennas,
        pilot_length: config.pilot_length,
        pilot_power: config.pilot_power(),
        despread_noise: config.despread_noise(),
        crosscorr_gain: config.crosscorr_gain(),
        tail: config.tail_model,
        weights,
        support: (lo, hi),
        interferer_law: law,
    })
}

impl StatisticModel {
    /// Degrees of freedom, `2M`.
    pub fn dof(&self) -> usize {
        2 * self.antennas
    }

    pub fn antennas(&self) -> usize {
        self.antennas
    }

    pub fn tail_model(&self) -> TailModel {
        self.tail
    }

    pub fn crosscorr_gain(&self) -> f64 {
        self.crosscorr_gain
    }

    pub fn pilot_power(&self) -> f64 {
        self.pilot_power
    }

    /// Law of the cross-root interferer count `J`.
    pub fn interferer_law(&self) -> BinomialLaw {
        self.interferer_law
    }

    /// Largest interferer count, `K − K_r`.
    pub fn max_interferers(&self) -> usize {
        self.weights.len() - 1
    }

    /// `P(J = q)` for `q = 0..=K−K_r`.
    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// `(q, P(J = q))` pairs over the full mixture.
    pub fn components(&self) -> impl Iterator<Item = (usize, f64)> + '_ {
        self.weights.iter().copied().enumerate()
    }

    /// Components that carry non-negligible weight.
    pub(crate) fn significant_components(&self) -> impl Iterator<Item = (usize, f64)> + '_ {
        let (lo, hi) = self.support;
        (lo..=hi).map(move |q| (q, self.weights[q]))
    }

    pub fn var_active(&self, q: usize) -> f64 {
        (self.pilot_length as f64 * self.pilot_power
            + self.crosscorr_gain * q as f64 * self.pilot_power
            + self.despread_noise)
            / 2.0
    }

    pub fn var_idle(&self, q: usize) -> f64 {
        (self.crosscorr_gain * q as f64 * self.pilot_power + self.despread_noise) / 2.0
    }

    /// `(P(X ≤ x), P(X > x))` for the unit-scale `2M`-DoF statistic under the
    /// configured tail model.
    pub(crate) fn unit_tails(&self, x: f64) -> Result<(f64, f64)> {
        match self.tail {
            TailModel::Gaussian => {
                let dof = self.dof() as f64;
                let z = (x - dof) / (2.0 * dof).sqrt();
                Ok((upper_tail(-z), upper_tail(z)))
            }
            TailModel::ExactChiSquare => regularized_gamma(self.antennas as f64, x / 2.0),
        }
    }
}
