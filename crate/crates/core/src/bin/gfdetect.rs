use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use gfdetect::detector::{
    build_statistic_model, false_alarm_probability, max_scheduling_size, min_pilot_length,
    miss_probability, solve_threshold, CrossCorrModel, ProbeGroup, SystemConfig, TailModel,
};
use gfdetect::montecarlo::{run_trials, SimulationMode, TrialPlan, RNG_ALGORITHM};
use gfdetect::pilot::{generate_zc, write_sequence_csv, PilotSpec};
use gfdetect::runner::{self, SweepSpec};
use gfdetect::{fmt_f64, Error};

#[derive(Parser)]
#[command(
    name = "gfdetect",
    version,
    about = "Activity detection thresholds and false-alarm rates for grant-free access"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Zadoff-Chu pilot utilities.
    Pilot {
        #[command(subcommand)]
        command: PilotCommand,
    },
    /// Solve the detection threshold for a target P_D.
    Threshold(DetectorArgs),
    /// False-alarm probability at the solved threshold, or at --omega.
    Pfa {
        #[command(flatten)]
        detector: DetectorArgs,
        #[arg(long)]
        omega: Option<f64>,
    },
    /// Largest user group meeting the outage limit.
    Kmax(DetectorArgs),
    /// Shortest prime pilot length whose pool covers K_max.
    Minlen(DetectorArgs),
    /// Monte Carlo estimate of P_D and P_FA next to the analytic values.
    Simulate(SimulateArgs),
    /// Run a sweep described by a JSON file.
    Sweep {
        #[arg(long)]
        config: PathBuf,
        #[command(flatten)]
        out: SweepOutput,
    },
    /// Preset sweep over M (L = 97, P_A = 0.1).
    Fig2(PresetArgs),
    /// Preset sweep over P_A (M = 128, L = 47).
    Fig3(PresetArgs),
}

#[derive(Subcommand)]
enum PilotCommand {
    /// Print one sequence as index,re,im rows.
    Dump {
        #[arg(long)]
        length: usize,
        #[arg(long)]
        root: usize,
        #[arg(long, default_value_t = 0)]
        shift: usize,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum TailArg {
    Gaussian,
    Exact,
}

#[derive(Clone, Copy, ValueEnum)]
enum XcorrArg {
    Paper,
    Zc,
}

#[derive(Clone, Copy, ValueEnum)]
enum GroupArg {
    Smallest,
    Largest,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Model,
    Waveform,
}

impl From<TailArg> for TailModel {
    fn from(t: TailArg) -> Self {
        match t {
            TailArg::Gaussian => TailModel::Gaussian,
            TailArg::Exact => TailModel::ExactChiSquare,
        }
    }
}

impl From<XcorrArg> for CrossCorrModel {
    fn from(x: XcorrArg) -> Self {
        match x {
            XcorrArg::Paper => CrossCorrModel::PaperUnit,
            XcorrArg::Zc => CrossCorrModel::TrueZc,
        }
    }
}

impl From<GroupArg> for ProbeGroup {
    fn from(g: GroupArg) -> Self {
        match g {
            GroupArg::Smallest => ProbeGroup::Smallest,
            GroupArg::Largest => ProbeGroup::Largest,
        }
    }
}

impl From<ModeArg> for SimulationMode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Model => SimulationMode::ModelFaithful,
            ModeArg::Waveform => SimulationMode::Waveform,
        }
    }
}

#[derive(Args, Clone)]
struct ModelFlags {
    #[arg(long, default_value_t = 15.0)]
    snr_db: f64,
    /// Per-symbol noise variance; defaults to L.
    #[arg(long)]
    noise_variance: Option<f64>,
    #[arg(long, value_enum, default_value = "gaussian")]
    tail: TailArg,
    #[arg(long, value_enum, default_value = "paper")]
    xcorr: XcorrArg,
    #[arg(long, value_enum, default_value = "smallest")]
    probe_group: GroupArg,
}

impl ModelFlags {
    fn apply(&self, mut c: SystemConfig) -> SystemConfig {
        c = c
            .with_snr_db(self.snr_db)
            .with_tail(self.tail.into())
            .with_crosscorr(self.xcorr.into())
            .with_probe_group(self.probe_group.into());
        if let Some(v) = self.noise_variance {
            c = c.with_noise_variance(v);
        }
        c
    }
}

#[derive(Args, Clone)]
struct DetectorArgs {
    #[arg(long)]
    antennas: usize,
    #[arg(long)]
    pilot_len: Option<usize>,
    /// User count; defaults to K_max.
    #[arg(long)]
    users: Option<usize>,
    #[arg(long)]
    arrival: f64,
    #[arg(long)]
    pd: Option<f64>,
    #[arg(long, default_value_t = 0.1)]
    po: f64,
    #[command(flatten)]
    model: ModelFlags,
    /// Print a header line before the row.
    #[arg(long)]
    header: bool,
}

impl DetectorArgs {
    /// Full config; `K` falls back to `K_max` and `L` to the shortest length
    /// that fits `K`.
    fn config(&self) -> gfdetect::Result<SystemConfig> {
        let pd = self
            .pd
            .ok_or_else(|| Error::Config("target_detection_PD: --pd is required".into()))?;
        let users = match self.users {
            Some(k) => k,
            None => max_scheduling_size(self.antennas, self.arrival, self.po)?,
        };
        let length = self.pilot_len.unwrap_or_else(|| min_pilot_length(users));
        let c = SystemConfig::new(self.antennas, length, users, self.arrival, pd, self.po);
        let c = self.model.apply(c);
        c.validate()?;
        Ok(c)
    }
}

#[derive(Args)]
struct SimulateArgs {
    #[command(flatten)]
    detector: DetectorArgs,
    #[arg(long, value_enum, default_value = "model")]
    mode: ModeArg,
    /// Total trials, split between the active and idle conditionings.
    #[arg(long, default_value_t = 100_000)]
    trials: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// 1-based probe user; defaults to one in the configured probe group.
    #[arg(long)]
    probe_user: Option<usize>,
    /// Use this threshold instead of solving for one.
    #[arg(long)]
    omega: Option<f64>,
}

#[derive(Args)]
struct SweepOutput {
    /// Output file; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Monte Carlo trials per row (0 = analytic only).
    #[arg(long)]
    trials: Option<u64>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, value_enum)]
    mode: Option<ModeArg>,
}

impl SweepOutput {
    fn apply(&self, spec: &mut SweepSpec) {
        if let Some(n) = self.trials {
            spec.mc_trials = n;
        }
        if let Some(s) = self.seed {
            spec.seed = s;
        }
        if let Some(m) = self.mode {
            spec.mc_mode = m.into();
        }
    }
}

#[derive(Args)]
struct PresetArgs {
    #[command(flatten)]
    out: SweepOutput,
    #[arg(long, value_enum, default_value = "gaussian")]
    tail: TailArg,
    #[arg(long, value_enum, default_value = "paper")]
    xcorr: XcorrArg,
    #[arg(long, value_enum, default_value = "smallest")]
    probe_group: GroupArg,
}

fn csv_writer<W: Write>(out: W) -> csv::Writer<W> {
    csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(out)
}

fn print_row(header: bool, names: &[&str], values: Vec<String>) -> gfdetect::Result<()> {
    let stdout = io::stdout();
    let mut w = csv_writer(stdout.lock());
    let fail = |e: csv::Error| Error::Io {
        path: "<stdout>".into(),
        source: e.into(),
    };
    if header {
        w.write_record(names).map_err(fail)?;
    }
    w.write_record(values).map_err(fail)?;
    w.flush().map_err(|e| Error::Io {
        path: "<stdout>".into(),
        source: e,
    })
}

const INPUT_COLUMNS: [&str; 11] = [
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
    "K_r",
];

fn input_values(c: &SystemConfig) -> Vec<String> {
    vec![
        c.antennas.to_string(),
        c.pilot_length.to_string(),
        c.users.to_string(),
        fmt_f64(c.arrival_rate),
        fmt_f64(c.target_detection),
        fmt_f64(c.outage),
        fmt_f64(c.pilot_snr_db),
        fmt_f64(c.noise_variance()),
        c.tail_model.as_str().into(),
        c.crosscorr_model.as_str().into(),
        c.probe_group_size().to_string(),
    ]
}

fn detector_row(args: &DetectorArgs, omega: Option<f64>) -> gfdetect::Result<()> {
    let c = args.config()?;
    let group = c.probe_group_size();
    let (omega, miss, pfa) = match omega {
        Some(omega) => {
            let model = build_statistic_model(&c, group)?;
            (
                omega,
                miss_probability(omega, &model)?,
                false_alarm_probability(omega, &model)?,
            )
        }
        None => {
            let t = solve_threshold(&c, group)?;
            (t.omega, t.achieved_miss, t.analytic_pfa)
        }
    };
    let mut names = INPUT_COLUMNS.to_vec();
    names.extend(["omega", "miss", "pfa"]);
    let mut values = input_values(&c);
    values.extend([fmt_f64(omega), fmt_f64(miss), fmt_f64(pfa)]);
    print_row(args.header, &names, values)
}

fn kmax_row(args: &DetectorArgs, with_length: bool) -> gfdetect::Result<()> {
    let kmax = max_scheduling_size(args.antennas, args.arrival, args.po)?;
    let mut names = vec!["M", "P_A", "P_O", "kmax"];
    let mut values = vec![
        args.antennas.to_string(),
        fmt_f64(args.arrival),
        fmt_f64(args.po),
        kmax.to_string(),
    ];
    if with_length {
        names.push("min_L");
        values.push(if kmax == 0 {
            String::new()
        } else {
            min_pilot_length(kmax).to_string()
        });
    }
    print_row(args.header, &names, values)
}

fn simulate(args: &SimulateArgs) -> gfdetect::Result<()> {
    let c = args.detector.config()?;
    let mut plan = TrialPlan::new(c.clone(), args.mode.into(), args.trials, args.seed);
    if let Some(j) = args.probe_user {
        plan = plan.with_probe_user(j);
    }
    let (_, group) = plan.probe()?;
    let model = build_statistic_model(&c, group)?;
    let omega = match args.omega {
        Some(o) => o,
        None => solve_threshold(&c, group)?.omega,
    };
    let r = run_trials(&plan, omega)?;
    let mut names = INPUT_COLUMNS.to_vec();
    names.extend([
        "probe_user",
        "omega",
        "miss",
        "pfa_analytic",
        "pd_analytic",
        "pd_mc",
        "pd_mc_low",
        "pd_mc_high",
        "pfa_mc",
        "pfa_mc_low",
        "pfa_mc_high",
        "pd_trials",
        "pfa_trials",
        "mode",
        "seed",
        "rng",
    ]);
    let miss = miss_probability(omega, &model)?;
    let mut values = input_values(&c);
    values[10] = group.to_string();
    values.extend([
        r.probe_user.to_string(),
        fmt_f64(omega),
        fmt_f64(miss),
        fmt_f64(false_alarm_probability(omega, &model)?),
        fmt_f64(1.0 - miss),
        fmt_f64(r.empirical_pd),
        fmt_f64(r.wilson_ci_pd.0),
        fmt_f64(r.wilson_ci_pd.1),
        fmt_f64(r.empirical_pfa),
        fmt_f64(r.wilson_ci_pfa.0),
        fmt_f64(r.wilson_ci_pfa.1),
        r.pd_trials.to_string(),
        r.pfa_trials.to_string(),
        r.mode.as_str().into(),
        r.seed.to_string(),
        RNG_ALGORITHM.into(),
    ]);
    print_row(args.detector.header, &names, values)
}

fn sweep(spec: &SweepSpec, out: &SweepOutput) -> gfdetect::Result<()> {
    let rows = runner::run_sweep(spec)?;
    match &out.out {
        Some(path) => runner::write_csv(&rows, path),
        None => runner::emit_csv(&rows, io::stdout().lock()).map_err(|e| Error::Io {
            path: "<stdout>".into(),
            source: e.into(),
        }),
    }
}

fn preset(mut spec: SweepSpec, args: &PresetArgs) -> gfdetect::Result<()> {
    spec.fixed = spec
        .fixed
        .with_tail(args.tail.into())
        .with_crosscorr(args.xcorr.into())
        .with_probe_group(args.probe_group.into());
    args.out.apply(&mut spec);
    sweep(&spec, &args.out)
}

fn run(cli: Cli) -> gfdetect::Result<()> {
    match cli.command {
        Command::Pilot {
            command:
                PilotCommand::Dump {
                    length,
                    root,
                    shift,
                },
        } => {
            let spec = PilotSpec::new(length, root, shift)?;
            write_sequence_csv(&generate_zc(&spec), io::stdout().lock()).map_err(|e| Error::Io {
                path: "<stdout>".into(),
                source: e,
            })
        }
        Command::Threshold(args) => detector_row(&args, None),
        Command::Pfa { detector, omega } => detector_row(&detector, omega),
        Command::Kmax(args) => kmax_row(&args, false),
        Command::Minlen(args) => kmax_row(&args, true),
        Command::Simulate(args) => simulate(&args),
        Command::Sweep { config, out } => {
            let mut spec = runner::load_sweep_spec(&config)?;
            out.apply(&mut spec);
            sweep(&spec, &out)
        }
        Command::Fig2(args) => preset(runner::fig2_spec(), &args),
        Command::Fig3(args) => preset(runner::fig3_spec(), &args),
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("gfdetect: {e}");
            ExitCode::from(match e {
                Error::Io { .. } => 3,
                Error::Internal(_) => 1,
                _ => 2,
            })
        }
    }
}
