use num_complex::Complex64;
use rand::Rng;

use super::rng::standard_complex_normal;
use crate::detector::SystemConfig;
use crate::error::{Error, Result};
use crate::pilot::PilotAssignment;

/// Received pilot block `Y`, `M` rows by `L` columns, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct ReceivedPilot {
    antennas: usize,
    length: usize,
    data: Vec<Complex64>,
}

impl ReceivedPilot {
    pub fn zeros(antennas: usize, length: usize) -> Self {
        Self {
            antennas,
            length,
            data: vec![Complex64::new(0.0, 0.0); antennas * length],
        }
    }

    pub fn from_rows(antennas: usize, length: usize, data: Vec<Complex64>) -> Result<Self> {
        if data.len() != antennas * length {
            return Err(Error::invalid(format!(
                "{} entries cannot fill a {antennas}×{length} block",
                data.len()
            )));
        }
        Ok(Self {
            antennas,
            length,
            data,
        })
    }

    pub fn antennas(&self) -> usize {
        self.antennas
    }

    pub fn length(&self) -> usize {
        self.length
    }

    pub fn row(&self, antenna: usize) -> &[Complex64] {
        &self.data[antenna * self.length..(antenna + 1) * self.length]
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.data
    }

    /// `‖Y ψ‖²`.
    pub fn correlate_energy(&self, pilot: &[Complex64]) -> Result<f64> {
        if pilot.len() != self.length {
            return Err(Error::invalid(format!(
                "pilot of length {} against a block with {} columns",
                pilot.len(),
                self.length
            )));
        }
        Ok(self
            .data
            .chunks_exact(self.length)
            .map(|row| {
                row.iter()
                    .zip(pilot)
                    .map(|(y, p)| y * p)
                    .sum::<Complex64>()
                    .norm_sqr()
            })
            .sum())
    }
}

/// Parameters of the pilot-phase channel.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Synthesis {
    pub antennas: usize,
    pub pilot_power: f64,
    pub noise_variance: f64,
}

impl Synthesis {
    pub fn from_config(config: &SystemConfig) -> Self {
        Self {
            antennas: config.antennas,
            pilot_power: config.pilot_power(),
            noise_variance: config.noise_variance(),
        }
    }

    pub fn without_noise(self) -> Self {
        Self {
            noise_variance: 0.0,
            ..self
        }
    }

    /// `Y = Σ_active √p̄ h_j ψ_jᴴ + V` with Rayleigh `h_j` and white `V`.
    /// Channels are drawn first, in user order, then the noise row by row.
    pub fn received<R: Rng + ?Sized>(
        &self,
        rng: &mut R,
        pilots: &[Vec<Complex64>],
        activations: &[bool],
    ) -> Result<ReceivedPilot> {
        if pilots.len() != activations.len() {
            return Err(Error::invalid(format!(
                "{} activation flags for {} users",
                activations.len(),
                pilots.len()
            )));
        }
        let length = pilots.first().map_or(0, Vec::len);
        if pilots.iter().any(|p| p.len() != length) {
            return Err(Error::invalid("pilots differ in length"));
        }
        let mut y = ReceivedPilot::zeros(self.antennas, length);
        let amplitude = self.pilot_power.sqrt();
        for (pilot, _) in pilots.iter().zip(activations).filter(|(_, &a)| a) {
            for row in y.data.chunks_exact_mut(length) {
                let h = amplitude * standard_complex_normal(rng);
                for (y, p) in row.iter_mut().zip(pilot) {
                    *y += h * p.conj();
                }
            }
        }
        if self.noise_variance > 0.0 {
            let sd = self.noise_variance.sqrt();
            for y in &mut y.data {
                *y += sd * standard_complex_normal(rng);
            }
        }
        Ok(y)
    }
}

/// Synthesizes one received pilot block for the given activity pattern.
pub fn synthesize_received_pilot<R: Rng + ?Sized>(
    rng: &mut R,
    config: &SystemConfig,
    assignment: &PilotAssignment,
    activations: &[bool],
) -> Result<ReceivedPilot> {
    Synthesis::from_config(config).received(rng, &assignment.sequences(), activations)
}

/// `Z_j = ‖Y ψ_j‖²` for every user of the assignment.
pub fn sufficient_statistics(
    received: &ReceivedPilot,
    assignment: &PilotAssignment,
) -> Result<Vec<f64>> {
    if received.length() != assignment.length() {
        return Err(Error::invalid(format!(
            "block has {} columns but pilots have length {}",
            received.length(),
            assignment.length()
        )));
    }
    assignment
        .sequences()
        .iter()
        .map(|p| received.correlate_energy(p))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::montecarlo::rng::{trial_stream, Conditioning};
    use crate::pilot::assign_pilots;
    use crate::probstat::chi_square_cdf;

    fn rel(a: f64, b: f64) -> f64 {
        ((a - b) / b).abs()
    }

    #[test]
    fn noise_second_moment() {
        let cfg = SystemConfig::new(100, 7, 10, 0.1, 0.9, 0.1).with_noise_variance(3.0);
        let a = assign_pilots(10, 7).unwrap();
        let mut rng = trial_stream(5, Conditioning::ProbeIdle, 0);
        let mut total = 0.0;
        let mut entries = 0;
        for _ in 0..143 {
            let y = synthesize_received_pilot(&mut rng, &cfg, &a, &[false; 10]).unwrap();
            total += y.as_slice().iter().map(|z| z.norm_sqr()).sum::<f64>();
            entries += y.as_slice().len();
        }
        assert!(entries >= 100_000);
        assert!(rel(total / entries as f64, 3.0) < 0.05);
    }

    #[test]
    fn single_user_noiseless_energy() {
        let cfg = SystemConfig::new(16, 7, 10, 0.1, 0.9, 0.1);
        let a = assign_pilots(10, 7).unwrap();
        let pilots = a.sequences();
        let syn = Synthesis::from_config(&cfg).without_noise();
        let mut active = [false; 10];
        active[3] = true;

        // Replay the same stream to recover the channel the synthesis drew.
        let mut rng = trial_stream(9, Conditioning::ProbeActive, 0);
        let y = syn.received(&mut rng, &pilots, &active).unwrap();
        let mut replay = trial_stream(9, Conditioning::ProbeActive, 0);
        let h_norm: f64 = (0..16)
            .map(|_| standard_complex_normal(&mut replay).norm_sqr())
            .sum();

        let z = y.correlate_energy(&pilots[3]).unwrap();
        let want = cfg.pilot_power() * 49.0 * h_norm;
        assert!(rel(z, want) < 1e-9, "{z} vs {want}");
        assert!(rel(sufficient_statistics(&y, &a).unwrap()[3], want) < 1e-9);
    }

    #[test]
    fn same_root_user_is_invisible() {
        // K = 4 on L = 7 uses one root; users 1 and 2 differ only in shift.
        let cfg = SystemConfig::new(8, 7, 4, 0.1, 0.9, 0.1);
        let a = assign_pilots(4, 7).unwrap();
        assert_eq!(a.pilot_of(1).unwrap().root(), a.pilot_of(2).unwrap().root());
        let pilots = a.sequences();
        let syn = Synthesis::from_config(&cfg).without_noise();
        let mut rng = trial_stream(3, Conditioning::ProbeActive, 0);
        let only_probe = syn
            .received(&mut rng, &pilots, &[true, false, false, false])
            .unwrap();
        let mut rng = trial_stream(3, Conditioning::ProbeActive, 0);
        let both = syn
            .received(&mut rng, &pilots, &[true, true, false, false])
            .unwrap();
        let alone = only_probe.correlate_energy(&pilots[0]).unwrap();
        let mixed = both.correlate_energy(&pilots[0]).unwrap();
        assert!(rel(mixed, alone) < 1e-9);
        // the probe contributes nothing to the other user's statistic either
        let mut rng = trial_stream(4, Conditioning::ProbeActive, 0);
        let other = syn
            .received(&mut rng, &pilots, &[false, true, false, false])
            .unwrap();
        assert!(other.correlate_energy(&pilots[0]).unwrap() < 1e-18 * cfg.pilot_power() * 49.0);
    }

    #[test]
    fn zero_block_gives_zero_statistics() {
        let a = assign_pilots(12, 5).unwrap();
        let z = sufficient_statistics(&ReceivedPilot::zeros(4, 5), &a).unwrap();
        assert_eq!(z, vec![0.0; 12]);
    }

    #[test]
    fn shape_errors() {
        let cfg = SystemConfig::new(4, 5, 12, 0.1, 0.9, 0.1);
        let a = assign_pilots(12, 5).unwrap();
        let mut rng = trial_stream(0, Conditioning::ProbeIdle, 0);
        assert!(synthesize_received_pilot(&mut rng, &cfg, &a, &[false; 11]).is_err());
        assert!(sufficient_statistics(&ReceivedPilot::zeros(4, 7), &a).is_err());
        assert!(ReceivedPilot::from_rows(2, 3, vec![Complex64::new(0.0, 0.0); 5]).is_err());
    }

    /// One-sample Kolmogorov–Smirnov statistic against a continuous CDF.
    fn ks_statistic(mut xs: Vec<f64>, cdf: impl Fn(f64) -> f64) -> f64 {
        xs.sort_by(f64::total_cmp);
        let n = xs.len() as f64;
        xs.iter()
            .enumerate()
            .map(|(i, &x)| {
                let f = cdf(x);
                (f - i as f64 / n).max((i + 1) as f64 / n - f)
            })
            .fold(0.0, f64::max)
    }

    #[test]
    fn noise_only_statistic_is_chi_square() {
        let (m, l) = (8, 5);
        let cfg = SystemConfig::new(m, l, 6, 0.1, 0.9, 0.1);
        let a = assign_pilots(6, l).unwrap();
        let scale = cfg.despread_noise() / 2.0;
        let n = 10_000;
        let zs: Vec<f64> = (0..n)
            .map(|i| {
                let mut rng = trial_stream(21, Conditioning::ProbeIdle, i);
                let y = synthesize_received_pilot(&mut rng, &cfg, &a, &[false; 6]).unwrap();
                y.correlate_energy(&a.sequences()[0]).unwrap() / scale
            })
            .collect();
        let d = ks_statistic(zs, |x| chi_square_cdf(2 * m as u32, x).unwrap());
        // D·√n below 1.628 corresponds to p > 0.01.
        assert!(d * (n as f64).sqrt() < 1.628, "D = {d}");
    }
}
