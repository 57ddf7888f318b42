//! Scalar probability kernels: Gaussian tail and its inverse, binomial
//! PMF/tail in log space, and chi-square CDFs via the regularized incomplete
//! gamma function.

mod binomial;
mod chisq;
mod normal;
mod saddle;

pub use binomial::BinomialLaw;
pub use chisq::{chi_square_cdf, chi_square_sf, regularized_gamma};
pub(crate) use normal::upper_tail;
pub use normal::{normal_cdf, q_function, q_inverse};

/// Neumaier compensated summation.
#[derive(Debug, Default, Clone, Copy)]
pub struct CompensatedSum {
    sum: f64,
    carry: f64,
}

impl CompensatedSum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.carry += (self.sum - t) + x;
        } else {
            self.carry += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.carry
    }
}

impl FromIterator<f64> for CompensatedSum {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut s = Self::new();
        for x in iter {
            s.add(x);
        }
        s
    }
}
