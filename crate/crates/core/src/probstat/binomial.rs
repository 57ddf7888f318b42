use super::saddle::ln_binomial_density;
use super::CompensatedSum;
use crate::error::{Error, Result};

/// Terms below this fraction of the running sum, past the mode, end a tail sum.
const TAIL_CUTOFF: f64 = 1e-20;

/// Binomial distribution `B(n, p)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BinomialLaw {
    trials: u64,
    success: f64,
}

impl BinomialLaw {
    pub fn new(trials: u64, success: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&success) {
            return Err(Error::invalid(format!(
                "binomial success probability {success} outside [0, 1]"
            )));
        }
        Ok(Self { trials, success })
    }

    pub fn trials(&self) -> u64 {
        self.trials
    }

    pub fn success(&self) -> f64 {
        self.success
    }

    pub fn mean(&self) -> f64 {
        self.trials as f64 * self.success
    }

    fn mode(&self) -> u64 {
        (((self.trials + 1) as f64 * self.success).floor() as u64).min(self.trials)
    }

    /// `ln P(J = k)`; `-inf` outside the support.
    pub fn ln_pmf(&self, k: u64) -> f64 {
        let (n, p) = (self.trials, self.success);
        if k > n {
            return f64::NEG_INFINITY;
        }
        if p == 0.0 {
            return if k == 0 { 0.0 } else { f64::NEG_INFINITY };
        }
        if p == 1.0 {
            return if k == n { 0.0 } else { f64::NEG_INFINITY };
        }
        ln_binomial_density(k as f64, n as f64, p)
    }

    /// `P(J = k)`. Returns 0 for `k > n`.
    pub fn pmf(&self, k: u64) -> f64 {
        self.ln_pmf(k).exp()
    }

    /// Upper tail `P(J ≥ m)` by direct summation of the PMF over whichever
    /// side of the mean is shorter.
    pub fn tail(&self, m: u64) -> f64 {
        let n = self.trials;
        if m == 0 {
            return 1.0;
        }
        if m > n {
            return 0.0;
        }
        let mode = self.mode();
        if m as f64 > self.mean() {
            let mut acc = CompensatedSum::new();
            for k in m..=n {
                let t = self.pmf(k);
                acc.add(t);
                if k > mode && t <= acc.value() * TAIL_CUTOFF {
                    break;
                }
            }
            acc.value().clamp(0.0, 1.0)
        } else {
            let mut acc = CompensatedSum::new();
            for k in (0..m).rev() {
                let t = self.pmf(k);
                acc.add(t);
                if k < mode && t <= acc.value() * TAIL_CUTOFF {
                    break;
                }
            }
            (1.0 - acc.value()).clamp(0.0, 1.0)
        }
    }

    /// Lower tail `P(J ≤ m)`.
    pub fn cdf(&self, m: u64) -> f64 {
        1.0 - self.tail(m + 1)
    }
}
