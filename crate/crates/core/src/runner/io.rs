use std::fs;
use std::io::Write;
use std::path::Path;

use serde::de::DeserializeOwned;

use super::{SweepRow, SweepSpec};
use crate::detector::SystemConfig;
use crate::error::{Error, Result};
use crate::fmt_f64;

pub const CSV_HEADER: [&str; 27] = [
    "status",
    "M",
    "L",
    "K",
    "P_A",
    "P_D",
    "P_O",
    "snr_db",
    "noise_variance",
    "tail_model",
    "crosscorr_model",
    "probe_group",
    "K_r",
    "kmax",
    "omega",
    "miss",
    "pfa_analytic",
    "pd_mc",
    "pd_mc_low",
    "pd_mc_high",
    "pfa_mc",
    "pfa_mc_low",
    "pfa_mc_high",
    "mc_trials",
    "mode",
    "seed",
    "rng",
];

fn load<T: DeserializeOwned>(path: &Path) -> Result<T> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    serde_json::from_str(&text).map_err(|e| Error::Config(format!("{}: {e}", path.display())))
}

/// Reads and validates a JSON system config.
pub fn load_system_config(path: impl AsRef<Path>) -> Result<SystemConfig> {
    let config: SystemConfig = load(path.as_ref())?;
    config.validate()?;
    Ok(config)
}

/// Reads and validates a JSON sweep spec.
pub fn load_sweep_spec(path: impl AsRef<Path>) -> Result<SweepSpec> {
    let spec: SweepSpec = load(path.as_ref())?;
    spec.validate()?;
    Ok(spec)
}

fn opt<T>(x: Option<T>, f: impl FnOnce(T) -> String) -> String {
    x.map(f).unwrap_or_default()
}

impl SweepRow {
    /// Fields in [`CSV_HEADER`] order.
    pub fn record(&self) -> Vec<String> {
        let c = &self.config;
        let mc = self.mc.as_ref();
        vec![
            self.status.as_str().to_owned(),
            c.antennas.to_string(),
            c.pilot_length.to_string(),
            c.users.to_string(),
            fmt_f64(c.arrival_rate),
            fmt_f64(c.target_detection),
            fmt_f64(c.outage),
            fmt_f64(c.pilot_snr_db),
            fmt_f64(c.noise_variance()),
            c.tail_model.as_str().to_owned(),
            c.crosscorr_model.as_str().to_owned(),
            c.probe_group.as_str().to_owned(),
            self.probe_group_size.to_string(),
            opt(self.kmax, |k| k.to_string()),
            opt(self.omega, fmt_f64),
            opt(self.miss, fmt_f64),
            opt(self.pfa_analytic, fmt_f64),
            opt(mc, |m| fmt_f64(m.pd)),
            opt(mc, |m| fmt_f64(m.pd_ci.0)),
            opt(mc, |m| fmt_f64(m.pd_ci.1)),
            opt(mc, |m| fmt_f64(m.pfa)),
            opt(mc, |m| fmt_f64(m.pfa_ci.0)),
            opt(mc, |m| fmt_f64(m.pfa_ci.1)),
            opt(mc, |m| m.trials.to_string()),
            opt(mc, |m| m.mode.as_str().to_owned()),
            opt(mc, |m| m.seed.to_string()),
            opt(mc, |_| crate::montecarlo::RNG_ALGORITHM.to_owned()),
        ]
    }
}

/// Writes the header and one line per row, LF-terminated.
pub fn emit_csv<W: Write>(rows: &[SweepRow], out: W) -> csv::Result<()> {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(out);
    w.write_record(CSV_HEADER)?;
    for row in rows {
        w.write_record(row.record())?;
    }
    w.flush()?;
    Ok(())
}

/// [`emit_csv`] into a file; errors carry the path.
pub fn write_csv(rows: &[SweepRow], path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let file = fs::File::create(path).map_err(|e| Error::io(path, e))?;
    emit_csv(rows, std::io::BufWriter::new(file)).map_err(|e| Error::io(path, e.into()))
}
