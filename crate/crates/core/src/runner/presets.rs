use super::{SweepAxis, SweepSpec};
use crate::detector::SystemConfig;

/// Detection targets for the preset sweeps.
pub const PRESET_PD_TARGETS: [f64; 3] = [0.9, 0.99, 0.999];

/// False-alarm rate against antenna count: `M ∈ {32, …, 512}`, `L = 97`,
/// `P_A = 0.1`, `K = K_max(M)` at `P_O = 0.1`.
pub fn fig2_spec() -> SweepSpec {
    SweepSpec {
        axis: SweepAxis::Antennas,
        grid: vec![32.0, 64.0, 128.0, 256.0, 512.0],
        fixed: SystemConfig::new(32, 97, 1, 0.1, 0.9, 0.1),
        pd_targets: PRESET_PD_TARGETS.to_vec(),
        couple_kmax: true,
        mc_trials: 0,
        mc_mode: Default::default(),
        seed: 0,
    }
}

/// False-alarm rate against arrival rate: `P_A ∈ {0.1, …, 0.9}`, `M = 128`,
/// `L = 47`, `K = K_max(P_A)` at `P_O = 0.1`.
pub fn fig3_spec() -> SweepSpec {
    SweepSpec {
        axis: SweepAxis::ArrivalRate,
        grid: vec![0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9],
        fixed: SystemConfig::new(128, 47, 1, 0.1, 0.9, 0.1),
        pd_targets: PRESET_PD_TARGETS.to_vec(),
        couple_kmax: true,
        mc_trials: 0,
        mc_mode: Default::default(),
        seed: 0,
    }
}
