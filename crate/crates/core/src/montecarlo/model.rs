use rand::Rng;
use rand_distr::{Binomial, ChiSquared, Distribution};

use crate::detector::StatisticModel;
use crate::error::{Error, Result};

/// Draws the probe statistic straight from the conditional chi-square
/// mixture: `J ~ B(K − K_r, P_A)`, then `Z = σ²(J)·χ²_{2M}`.
#[derive(Debug, Clone)]
pub struct ModelSampler {
    model: StatisticModel,
    interferers: Binomial,
    chi_square: ChiSquared<f64>,
}

impl ModelSampler {
    pub fn new(model: &StatisticModel) -> Result<Self> {
        let law = model.interferer_law();
        let interferers = Binomial::new(law.trials(), law.success())
            .map_err(|e| Error::invalid(format!("interferer law: {e}")))?;
        let chi_square = ChiSquared::new(model.dof() as f64)
            .map_err(|e| Error::invalid(format!("chi-square law: {e}")))?;
        Ok(Self {
            model: model.clone(),
            interferers,
            chi_square,
        })
    }

    pub fn draw<R: Rng + ?Sized>(&self, rng: &mut R, active: bool) -> f64 {
        let q = self.interferers.sample(rng) as usize;
        let scale = if active {
            self.model.var_active(q)
        } else {
            self.model.var_idle(q)
        };
        scale * self.chi_square.sample(rng)
    }
}

/// One draw of `Z` given the probe's activity. Builds the sampler each call;
/// use [`ModelSampler`] in loops.
pub fn draw_statistic_model_faithful<R: Rng + ?Sized>(
    rng: &mut R,
    model: &StatisticModel,
    active: bool,
) -> Result<f64> {
    Ok(ModelSampler::new(model)?.draw(rng, active))
}
