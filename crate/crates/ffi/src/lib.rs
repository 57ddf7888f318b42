//! C interface to `gfdetect`.
//!
//! Every fallible call returns a [`GfdStatus`]; on failure the message is
//! available from [`gfd_last_error_message`] on the same thread. Configs are
//! opaque handles owned by the caller and released with [`gfd_config_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use gfdetect::detector::{
    build_statistic_model, false_alarm_probability, max_scheduling_size, min_pilot_length,
    miss_probability, solve_threshold, CrossCorrModel, ProbeGroup, SystemConfig, TailModel,
};
use gfdetect::montecarlo::{run_trials, SimulationMode, TrialPlan};
use gfdetect::pilot::{generate_zc, PilotSpec};
use gfdetect::probstat::q_function;
use gfdetect::Error;

pub const GFD_TAIL_GAUSSIAN: u32 = 0;
pub const GFD_TAIL_EXACT_CHI_SQUARE: u32 = 1;

pub const GFD_XCORR_PAPER_UNIT: u32 = 0;
pub const GFD_XCORR_TRUE_ZC: u32 = 1;

pub const GFD_PROBE_SMALLEST: u32 = 0;
pub const GFD_PROBE_LARGEST: u32 = 1;

pub const GFD_MODE_MODEL_FAITHFUL: u32 = 0;
pub const GFD_MODE_WAVEFORM: u32 = 1;

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GfdStatus {
    Ok = 0,
    InvalidArgument = 1,
    Domain = 2,
    CapacityExceeded = 3,
    Config = 4,
    Io = 5,
    Internal = 6,
    NullPointer = 7,
    Panic = 8,
}

/// Opaque system configuration.
pub struct GfdConfig {
    inner: SystemConfig,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default)]
pub struct GfdThreshold {
    pub omega: f64,
    pub achieved_miss: f64,
    pub analytic_pfa: f64,
    pub probe_group_size: usize,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default)]
pub struct GfdTrialReport {
    pub empirical_pd: f64,
    pub empirical_pfa: f64,
    pub pd_ci_low: f64,
    pub pd_ci_high: f64,
    pub pfa_ci_low: f64,
    pub pfa_ci_high: f64,
    pub detections: u64,
    pub false_alarms: u64,
    pub pd_trials: u64,
    pub pfa_trials: u64,
    pub probe_user: usize,
    pub probe_group_size: usize,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_last_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(err: &Error) -> GfdStatus {
    match err {
        Error::InvalidArgument(_) => GfdStatus::InvalidArgument,
        Error::Domain(_) => GfdStatus::Domain,
        Error::CapacityExceeded { .. } => GfdStatus::CapacityExceeded,
        Error::Config(_) => GfdStatus::Config,
        Error::Io { .. } => GfdStatus::Io,
        Error::Internal(_) => GfdStatus::Internal,
    }
}

/// Runs `f`, records any error or panic, and maps it to a status.
fn guard(f: impl FnOnce() -> Result<(), (GfdStatus, String)>) -> GfdStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => GfdStatus::Ok,
        Ok(Err((status, msg))) => {
            set_last_error(&msg);
            status
        }
        Err(_) => {
            set_last_error("panic inside gfdetect");
            GfdStatus::Panic
        }
    }
}

fn lift(err: Error) -> (GfdStatus, String) {
    (status_of(&err), err.to_string())
}

fn null(what: &str) -> (GfdStatus, String) {
    (GfdStatus::NullPointer, format!("{what} is null"))
}

fn bad(msg: String) -> (GfdStatus, String) {
    (GfdStatus::InvalidArgument, msg)
}

/// # Safety
/// `p` must be null or point to a live `T`.
unsafe fn deref<'a, T>(p: *const T, what: &str) -> Result<&'a T, (GfdStatus, String)> {
    p.as_ref().ok_or_else(|| null(what))
}

/// # Safety
/// `p` must be null or point to writable memory for a `T`.
unsafe fn deref_mut<'a, T>(p: *mut T, what: &str) -> Result<&'a mut T, (GfdStatus, String)> {
    p.as_mut().ok_or_else(|| null(what))
}

/// Message of the last failed call on this thread, or null. The pointer is
/// valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn gfd_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// New config with default SNR (15 dB), noise variance `L`, Gaussian tail,
/// unit cross-correlation and the smallest probe group. Not validated here.
#[no_mangle]
pub extern "C" fn gfd_config_new(
    antennas: usize,
    pilot_length: usize,
    users: usize,
    arrival_rate: f64,
    target_detection: f64,
    outage: f64,
) -> *mut GfdConfig {
    Box::into_raw(Box::new(GfdConfig {
        inner: SystemConfig::new(
            antennas,
            pilot_length,
            users,
            arrival_rate,
            target_detection,
            outage,
        ),
    }))
}

/// # Safety
/// `config` must be null or a handle from [`gfd_config_new`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn gfd_config_free(config: *mut GfdConfig) {
    if !config.is_null() {
        drop(Box::from_raw(config));
    }
}

unsafe fn update(
    config: *mut GfdConfig,
    f: impl FnOnce(&mut SystemConfig) -> Result<(), (GfdStatus, String)>,
) -> GfdStatus {
    guard(|| f(&mut deref_mut(config, "config")?.inner))
}

/// # Safety
/// `config` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn gfd_config_set_snr_db(config: *mut GfdConfig, snr_db: f64) -> GfdStatus {
    update(config, |c| {
        c.pilot_snr_db = snr_db;
        Ok(())
    })
}

/// # Safety
/// `config` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn gfd_config_set_noise_variance(
    config: *mut GfdConfig,
    variance: f64,
) -> GfdStatus {
    update(config, |c| {
        c.noise_per_symbol_variance = Some(variance);
        Ok(())
    })
}

/// # Safety
/// `config` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn gfd_config_set_users(config: *mut GfdConfig, users: usize) -> GfdStatus {
    update(config, |c| {
        c.users = users;
        Ok(())
    })
}

/// `tail` is one of the `GFD_TAIL_*` constants.
///
/// # Safety
/// `config` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn gfd_config_set_tail(config: *mut GfdConfig, tail: u32) -> GfdStatus {
    update(config, |c| {
        c.tail_model = match tail {
            GFD_TAIL_GAUSSIAN => TailModel::Gaussian,
            GFD_TAIL_EXACT_CHI_SQUARE => TailModel::ExactChiSquare,
            _ => return Err(bad(format!("unknown tail model {tail}"))),
        };
        Ok(())
    })
}

/// `model` is one of the `GFD_XCORR_*` constants.
///
/// # Safety
/// `config` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn gfd_config_set_crosscorr(config: *mut GfdConfig, model: u32) -> GfdStatus {
    update(config, |c| {
        c.crosscorr_model = match model {
            GFD_XCORR_PAPER_UNIT => CrossCorrModel::PaperUnit,
            GFD_XCORR_TRUE_ZC => CrossCorrModel::TrueZc,
            _ => return Err(bad(format!("unknown cross-correlation model {model}"))),
        };
        Ok(())
    })
}

/// `group` is one of the `GFD_PROBE_*` constants.
///
/// # Safety
/// `config` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn gfd_config_set_probe_group(
    config: *mut GfdConfig,
    group: u32,
) -> GfdStatus {
    update(config, |c| {
        c.probe_group = match group {
            GFD_PROBE_SMALLEST => ProbeGroup::Smallest,
            GFD_PROBE_LARGEST => ProbeGroup::Largest,
            _ => return Err(bad(format!("unknown probe group {group}"))),
        };
        Ok(())
    })
}

/// # Safety
/// `config` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn gfd_config_validate(config: *const GfdConfig) -> GfdStatus {
    guard(|| deref(config, "config")?.inner.validate().map_err(lift))
}

/// Threshold for the config's target detection probability.
///
/// # Safety
/// `config` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn gfd_solve_threshold(
    config: *const GfdConfig,
    out: *mut GfdThreshold,
) -> GfdStatus {
    guard(|| {
        let c = &deref(config, "config")?.inner;
        let out = deref_mut(out, "out")?;
        let r = solve_threshold(c, c.probe_group_size()).map_err(lift)?;
        *out = GfdThreshold {
            omega: r.omega,
            achieved_miss: r.achieved_miss,
            analytic_pfa: r.analytic_pfa,
            probe_group_size: r.probe_group_size,
        };
        Ok(())
    })
}

unsafe fn evaluate(
    config: *const GfdConfig,
    omega: f64,
    out: *mut f64,
    f: fn(f64, &gfdetect::detector::StatisticModel) -> gfdetect::Result<f64>,
) -> GfdStatus {
    guard(|| {
        let c = &deref(config, "config")?.inner;
        let out = deref_mut(out, "out")?;
        let model = build_statistic_model(c, c.probe_group_size()).map_err(lift)?;
        *out = f(omega, &model).map_err(lift)?;
        Ok(())
    })
}

/// `P(Z ≤ omega | probe active)`.
///
/// # Safety
/// `config` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn gfd_miss_probability(
    config: *const GfdConfig,
    omega: f64,
    out: *mut f64,
) -> GfdStatus {
    evaluate(config, omega, out, miss_probability)
}

/// `P(Z > omega | probe idle)`.
///
/// # Safety
/// `config` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn gfd_false_alarm_probability(
    config: *const GfdConfig,
    omega: f64,
    out: *mut f64,
) -> GfdStatus {
    evaluate(config, omega, out, false_alarm_probability)
}

/// Largest user group whose overload probability stays within `outage`.
/// Writes 0 when no group is feasible.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn gfd_max_scheduling_size(
    antennas: usize,
    arrival_rate: f64,
    outage: f64,
    out: *mut usize,
) -> GfdStatus {
    guard(|| {
        let out = deref_mut(out, "out")?;
        *out = max_scheduling_size(antennas, arrival_rate, outage).map_err(lift)?;
        Ok(())
    })
}

/// Smallest prime `L` with `L² − L ≥ kmax`.
#[no_mangle]
pub extern "C" fn gfd_min_pilot_length(kmax: usize) -> usize {
    min_pilot_length(kmax)
}

/// Writes the Zadoff-Chu sequence of `(length, root, shift)` into `re` and
/// `im`, each holding `capacity` doubles; `capacity` must be at least `length`.
///
/// # Safety
/// `re` and `im` must each be writable for `capacity` doubles.
#[no_mangle]
pub unsafe extern "C" fn gfd_zc_generate(
    length: usize,
    root: usize,
    shift: usize,
    re: *mut f64,
    im: *mut f64,
    capacity: usize,
) -> GfdStatus {
    guard(|| {
        if re.is_null() || im.is_null() {
            return Err(null("output buffer"));
        }
        if capacity < length {
            return Err(bad(format!(
                "buffer holds {capacity} entries, sequence needs {length}"
            )));
        }
        let spec = PilotSpec::new(length, root, shift).map_err(lift)?;
        let re = std::slice::from_raw_parts_mut(re, length);
        let im = std::slice::from_raw_parts_mut(im, length);
        for (i, z) in generate_zc(&spec).into_iter().enumerate() {
            re[i] = z.re;
            im[i] = z.im;
        }
        Ok(())
    })
}

/// Monte Carlo estimate at threshold `omega`. `mode` is a `GFD_MODE_*`
/// constant; `probe_user` is 1-based, or 0 for the config's probe group.
///
/// # Safety
/// `config` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn gfd_simulate(
    config: *const GfdConfig,
    mode: u32,
    trials: u64,
    seed: u64,
    probe_user: usize,
    omega: f64,
    out: *mut GfdTrialReport,
) -> GfdStatus {
    guard(|| {
        let c = &deref(config, "config")?.inner;
        let out = deref_mut(out, "out")?;
        let mode = match mode {
            GFD_MODE_MODEL_FAITHFUL => SimulationMode::ModelFaithful,
            GFD_MODE_WAVEFORM => SimulationMode::Waveform,
            _ => return Err(bad(format!("unknown simulation mode {mode}"))),
        };
        let mut plan = TrialPlan::new(c.clone(), mode, trials, seed);
        if probe_user != 0 {
            plan = plan.with_probe_user(probe_user);
        }
        let r = run_trials(&plan, omega).map_err(lift)?;
        *out = GfdTrialReport {
            empirical_pd: r.empirical_pd,
            empirical_pfa: r.empirical_pfa,
            pd_ci_low: r.wilson_ci_pd.0,
            pd_ci_high: r.wilson_ci_pd.1,
            pfa_ci_low: r.wilson_ci_pfa.0,
            pfa_ci_high: r.wilson_ci_pfa.1,
            detections: r.detections,
            false_alarms: r.false_alarms,
            pd_trials: r.pd_trials,
            pfa_trials: r.pfa_trials,
            probe_user: r.probe_user,
            probe_group_size: r.probe_group_size,
        };
        Ok(())
    })
}

/// Standard normal upper tail `Q(x)`.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn gfd_q_function(x: f64, out: *mut f64) -> GfdStatus {
    guard(|| {
        let out = deref_mut(out, "out")?;
        *out = q_function(x).map_err(lift)?;
        Ok(())
    })
}
