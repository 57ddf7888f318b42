//! Counter-based random streams.
//!
//! Every trial owns a ChaCha8 stream keyed by the run seed, with the stream
//! id packing the conditioning (probe active / idle) and the trial index. A
//! trial's draws therefore never depend on which worker ran it or in what
//! order.

use std::f64::consts::TAU;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Identifies the generator in report metadata.
pub const RNG_ALGORITHM: &str = "chacha8-stream-v1";

/// Which conditional probability a trial estimates.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Conditioning {
    ProbeActive,
    ProbeIdle,
}

impl Conditioning {
    fn tag(self) -> u64 {
        match self {
            Conditioning::ProbeActive => 0,
            Conditioning::ProbeIdle => 1,
        }
    }
}

/// The stream for trial `index` of a run.
pub fn trial_stream(seed: u64, conditioning: Conditioning, index: u64) -> ChaCha8Rng {
    debug_assert!(index < 1 << 63);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(conditioning.tag() << 63 | index);
    rng
}

/// One `CN(0, 1)` sample by Box–Muller: `|z|² ~ Exp(1)`, uniform phase.
#[inline]
pub fn standard_complex_normal<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    // 1 − U lies in (0, 1], so the logarithm is finite.
    let u1 = 1.0 - rng.random::<f64>();
    let u2 = rng.random::<f64>();
    Complex64::from_polar((-u1.ln()).sqrt(), TAU * u2)
}
