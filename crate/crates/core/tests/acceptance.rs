//! Acceptance suite. Runs every criterion, prints one PASS/FAIL line each,
//! and exits non-zero if any criterion fails.
//!
//!     cargo test -p gfdetect --test acceptance

#![allow(clippy::excessive_precision)]

use std::process::ExitCode;
use std::time::{Duration, Instant};

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use gfdetect::detector::{
    build_statistic_model, false_alarm_probability, max_scheduling_size, miss_probability,
    solve_threshold, CrossCorrModel, SystemConfig, TailModel,
};
use gfdetect::montecarlo::{run_trials, SimulationMode, TrialPlan};
use gfdetect::pilot::{cross_correlation, generate_zc, is_prime, PilotSpec};
use gfdetect::runner::{emit_csv, fig2_spec, fig3_spec, run_sweep, SweepRow, SweepSpec};

struct Outcome {
    pass: bool,
    detail: String,
}

impl Outcome {
    fn new(pass: bool, detail: impl Into<String>) -> Self {
        Self {
            pass,
            detail: detail.into(),
        }
    }
}

fn timed(limit: Option<Duration>, f: impl FnOnce() -> Outcome) -> Outcome {
    let start = Instant::now();
    let mut out = f();
    let took = start.elapsed();
    out.detail = format!("{}; {:.2} s", out.detail, took.as_secs_f64());
    if let Some(limit) = limit {
        if took > limit {
            out.pass = false;
            out.detail = format!("{} (limit {} s)", out.detail, limit.as_secs());
        }
    }
    out
}

/// Point used by the Monte Carlo criteria: M = 128, L = 97, P_A = 0.1,
/// K = K_max, P_D = 0.99.
fn mc_point() -> SystemConfig {
    let k = max_scheduling_size(128, 0.1, 0.1).unwrap();
    SystemConfig::new(128, 97, k, 0.1, 0.99, 0.1)
}

const MC_SEED: u64 = 20_240_601;

fn threshold_correctness() -> Outcome {
    let primes: Vec<usize> = (2..=101).filter(|&l| is_prime(l)).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let (mut worst_gap, mut failures) = (0f64, Vec::new());
    for i in 0..1000 {
        let l = primes[rng.random_range(0..primes.len())];
        let k = rng.random_range(1..=(l * (l - 1)).min(3000));
        let mut c = SystemConfig::new(
            rng.random_range(1..=512),
            l,
            k,
            rng.random_range(0.0..=1.0),
            rng.random_range(0.01..0.9999),
            0.1,
        )
        .with_snr_db(rng.random_range(-5.0..25.0));
        if rng.random_bool(0.5) {
            c = c.with_tail(TailModel::ExactChiSquare);
        }
        if rng.random_bool(0.5) {
            c = c.with_crosscorr(CrossCorrModel::TrueZc);
        }
        let target = 1.0 - c.target_detection;
        let model = build_statistic_model(&c, c.probe_group_size()).unwrap();
        match solve_threshold(&c, c.probe_group_size()) {
            Ok(t) => {
                let gap = (miss_probability(t.omega, &model).unwrap() - target).abs();
                worst_gap = worst_gap.max(gap);
                let above = miss_probability(t.omega * (1.0 + 1e-6), &model).unwrap();
                if gap > 1e-9 || above <= target {
                    failures.push(format!("#{i} gap {gap:e}"));
                }
            }
            Err(e) => failures.push(format!("#{i}: {e}")),
        }
    }
    Outcome::new(
        failures.is_empty(),
        format!("1000 configs, max |miss - (1-P_D)| = {worst_gap:.2e}, failures {failures:?}"),
    )
}

fn closed_form() -> Outcome {
    // Φ⁻¹(1 − P_D), 25-digit reference values
    let quantiles = [
        (0.5, 0.0),
        (0.9, -1.281551565544600466965103),
        (0.999, -3.0902323061678135415404),
    ];
    let mut worst = 0f64;
    for m in [16usize, 100, 512] {
        for (pd, z) in quantiles {
            let c = SystemConfig::new(m, 7, 20, 0.0, pd, 0.1);
            let model = build_statistic_model(&c, c.probe_group_size()).unwrap();
            let sigma2 = model.var_active(0);
            let mf = m as f64;
            let want = sigma2 * (2.0 * mf + 2.0 * mf.sqrt() * z);
            let got = solve_threshold(&c, c.probe_group_size()).unwrap().omega;
            worst = worst.max(((got - want) / want).abs());
        }
    }
    Outcome::new(
        worst <= 1e-9,
        format!("9 points, max relative error {worst:.2e}"),
    )
}

fn zc_suite() -> Outcome {
    let mut worst_same = 0f64;
    let mut worst_cross = 0f64;
    let mut checked = 0u64;
    for l in (2..=101).filter(|&l| is_prime(l)) {
        let seqs: Vec<Vec<Vec<Complex64>>> = (1..l)
            .map(|r| {
                (0..l)
                    .map(|s| generate_zc(&PilotSpec::new(l, r, s).unwrap()))
                    .collect()
            })
            .collect();
        let sqrt_l = (l as f64).sqrt();
        for (ri, root) in seqs.iter().enumerate() {
            // same root: every ordered shift pair
            for (s1, a) in root.iter().enumerate() {
                for (s2, b) in root.iter().enumerate() {
                    if s1 != s2 {
                        worst_same = worst_same.max(cross_correlation(a, b).unwrap().norm());
                        checked += 1;
                    }
                }
            }
            // Cross roots. The correlation of shifts (s1, s2) is a cyclic
            // re-indexing of the one for (0, s2 − s1), so pairing shift 0
            // with every shift of the other root covers all shift pairs;
            // short lengths are checked over every pair anyway.
            for (rj, other) in seqs.iter().enumerate() {
                if ri == rj {
                    continue;
                }
                let firsts: Vec<&Vec<Complex64>> = if l <= 13 {
                    root.iter().collect()
                } else {
                    vec![&root[0]]
                };
                for a in firsts {
                    for b in other {
                        let mag = cross_correlation(a, b).unwrap().norm();
                        worst_cross = worst_cross.max((mag - sqrt_l).abs());
                        checked += 1;
                    }
                }
            }
        }
    }
    Outcome::new(
        worst_same < 1e-9 && worst_cross <= 1e-9,
        format!(
            "{checked} correlations, max same-root |c| = {worst_same:.2e}, max ||c| - sqrt(L)| = {worst_cross:.2e}"
        ),
    )
}

fn analytic_vs_model_faithful() -> Outcome {
    // The model-faithful sampler draws exact chi-square variables, so the
    // analytic side uses the exact tail as well.
    let c = mc_point().with_tail(TailModel::ExactChiSquare);
    let t = solve_threshold(&c, c.probe_group_size()).unwrap();
    let plan = TrialPlan::new(c.clone(), SimulationMode::ModelFaithful, 2_000_000, MC_SEED);
    let r = run_trials(&plan, t.omega).unwrap();
    let se = |p: f64, n: u64| (p * (1.0 - p) / n as f64).sqrt();
    let pd_dev = (r.empirical_pd - c.target_detection) / se(c.target_detection, r.pd_trials);
    let pfa_dev = (r.empirical_pfa - t.analytic_pfa) / se(t.analytic_pfa, r.pfa_trials);
    Outcome::new(
        pd_dev.abs() <= 3.0 && pfa_dev.abs() <= 3.0,
        format!(
            "K = {}, 1e6 + 1e6 trials: P_D {:.6} vs {} ({pd_dev:+.2} SE), P_FA {:.4e} vs {:.4e} ({pfa_dev:+.2} SE)",
            c.users, r.empirical_pd, c.target_detection, r.empirical_pfa, t.analytic_pfa
        ),
    )
}

fn waveform_consistency() -> Outcome {
    let zc = mc_point()
        .with_tail(TailModel::ExactChiSquare)
        .with_crosscorr(CrossCorrModel::TrueZc);
    let paper = zc.clone().with_crosscorr(CrossCorrModel::PaperUnit);
    let group = zc.probe_group_size();
    let t = solve_threshold(&zc, group).unwrap();
    let paper_model = build_statistic_model(&paper, group).unwrap();
    let paper_pfa = false_alarm_probability(t.omega, &paper_model).unwrap();
    let paper_own = solve_threshold(&paper, group).unwrap().analytic_pfa;
    let plan = TrialPlan::new(zc.clone(), SimulationMode::Waveform, 8000, MC_SEED);
    let r = run_trials(&plan, t.omega).unwrap();
    let (lo, hi) = r.wilson_ci_pfa;
    let inside = (lo..=hi).contains(&t.analytic_pfa);
    let larger = zc.users > zc.pilot_length && t.analytic_pfa > paper_own;
    Outcome::new(
        inside && larger,
        format!(
            "waveform P_FA {:.5} CI [{lo:.5}, {hi:.5}] vs c=L analytic {:.5}; c=1 analytic {:.3e} at its own threshold, {:.3e} at this one; waveform P_D {:.4} (analytic active term omits the L-fold despreading gain)",
            r.empirical_pfa, t.analytic_pfa, paper_own, paper_pfa, r.empirical_pd
        ),
    )
}

/// `P(B(K, p) ≥ m)` for `K = 0..=k_hi`, by propagating the full PMF one
/// trial at a time.
fn outage_table(k_hi: usize, p: f64, m: usize) -> Vec<f64> {
    let mut pmf = vec![1.0];
    let mut out = vec![if m == 0 { 1.0 } else { 0.0 }];
    for _ in 1..=k_hi {
        let mut next = vec![0.0; pmf.len() + 1];
        for (j, &w) in pmf.iter().enumerate() {
            next[j] += (1.0 - p) * w;
            next[j + 1] += p * w;
        }
        pmf = next;
        out.push(pmf.iter().skip(m).sum());
    }
    out
}

fn kmax_reproduction() -> Outcome {
    let start = Instant::now();
    let k = max_scheduling_size(512, 0.1, 0.1).unwrap();
    let took = start.elapsed();
    let table = outage_table(5000, 0.1, 512);
    let oracle = (1..table.len())
        .take_while(|&k| table[k] <= 0.1)
        .last()
        .unwrap_or(0);
    Outcome::new(
        k == 4846 && oracle == 4846 && took < Duration::from_secs(1),
        format!(
            "K_max = {k} in {:.1} ms, oracle {oracle}; outage at 4846 = {:.5}, at 4847 = {:.5}; P_O = 0.1",
            took.as_secs_f64() * 1e3,
            table[4846],
            table[4847]
        ),
    )
}

fn pfa_by_target(rows: &[SweepRow]) -> Vec<(f64, Vec<f64>)> {
    let mut out: Vec<(f64, Vec<f64>)> = Vec::new();
    for r in rows {
        let pd = r.config.target_detection;
        let pfa = r.pfa_analytic.expect("feasible row");
        match out.iter_mut().find(|(t, _)| *t == pd) {
            Some((_, v)) => v.push(pfa),
            None => out.push((pd, vec![pfa])),
        }
    }
    out
}

fn fig2_shape() -> Outcome {
    let rows = run_sweep(&fig2_spec()).unwrap();
    let series = pfa_by_target(&rows);
    let mut pass = false;
    let mut notes = Vec::new();
    for (pd, v) in &series {
        let non_increasing = v.windows(2).all(|w| w[1] <= w[0]);
        let non_decreasing = v.windows(2).all(|w| w[1] >= w[0]);
        pass |= !non_increasing;
        let shape = match (non_increasing, non_decreasing) {
            (true, _) => "non-increasing",
            (false, true) => "rising",
            _ => "mixed",
        };
        notes.push(format!(
            "P_D {pd}: {shape} {:.1e}..{:.1e}",
            v[0],
            v[v.len() - 1]
        ));
    }
    Outcome::new(
        pass,
        format!(
            "P_FA over M = 32..512 not always decreasing: {}",
            notes.join("; ")
        ),
    )
}

fn fig3_shape() -> Outcome {
    let rows = run_sweep(&fig3_spec()).unwrap();
    let mut pass = true;
    let mut notes = Vec::new();
    for (pd, v) in pfa_by_target(&rows) {
        let max = v.iter().cloned().fold(f64::MIN, f64::max);
        let min = v.iter().cloned().fold(f64::MAX, f64::min);
        let ratio = max / min;
        pass &= ratio < 10.0;
        notes.push(format!("P_D {pd}: max/min {ratio:.1}"));
    }
    Outcome::new(
        pass,
        format!(
            "P_FA spread over P_A = 0.1..0.9 (< 10x required): {}",
            notes.join("; ")
        ),
    )
}

fn tail_convergence() -> Outcome {
    let mut worst = (0f64, String::new());
    let mut checked = 0;
    for spec in [fig2_spec(), fig3_spec()] {
        let exact = SweepSpec {
            fixed: spec.fixed.clone().with_tail(TailModel::ExactChiSquare),
            ..spec.clone()
        };
        for (g, e) in run_sweep(&spec)
            .unwrap()
            .iter()
            .zip(run_sweep(&exact).unwrap())
        {
            if g.config.antennas < 128 {
                continue;
            }
            checked += 1;
            let gap = ((g.omega.unwrap() - e.omega.unwrap()) / e.omega.unwrap()).abs();
            if gap > worst.0 {
                worst = (
                    gap,
                    format!(
                        "M {}, P_A {}, P_D {}",
                        g.config.antennas, g.config.arrival_rate, g.config.target_detection
                    ),
                );
            }
        }
    }
    Outcome::new(
        worst.0 <= 0.01,
        format!(
            "{checked} rows with M >= 128, worst relative threshold gap {:.2}% at {}",
            worst.0 * 100.0,
            worst.1
        ),
    )
}

fn determinism() -> Outcome {
    let spec = SweepSpec {
        grid: vec![128.0],
        fixed: mc_point().with_tail(TailModel::ExactChiSquare),
        pd_targets: vec![0.99],
        mc_trials: 2_000_000,
        seed: MC_SEED,
        ..fig2_spec()
    };
    let run = |threads: usize| {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .unwrap();
        pool.install(|| {
            let mut out = Vec::new();
            emit_csv(&run_sweep(&spec).unwrap(), &mut out).unwrap();
            out
        })
    };
    let (a, b) = (run(1), run(4));
    Outcome::new(
        a == b && !a.is_empty(),
        format!(
            "1 vs 4 worker threads: {} bytes each, identical = {}",
            a.len(),
            a == b
        ),
    )
}

fn main() -> ExitCode {
    type Criterion = (&'static str, Option<u64>, fn() -> Outcome);
    let criteria: [Criterion; 10] = [
        ("threshold correctness", Some(10), threshold_correctness),
        ("closed-form degeneracy", None, closed_form),
        ("Zadoff-Chu correlation suite", Some(30), zc_suite),
        (
            "analytic vs model-faithful Monte Carlo",
            Some(120),
            analytic_vs_model_faithful,
        ),
        ("waveform vs c=L analytic", None, waveform_consistency),
        ("K_max reproduction", None, kmax_reproduction),
        ("P_FA versus M not always decreasing", Some(30), fig2_shape),
        ("P_FA nearly flat in P_A", Some(30), fig3_shape),
        (
            "Gaussian vs exact tail thresholds within 1%",
            None,
            tail_convergence,
        ),
        ("determinism across worker counts", None, determinism),
    ];
    let mut failed = 0;
    for (i, (name, limit, f)) in criteria.into_iter().enumerate() {
        let out = timed(limit.map(Duration::from_secs), f);
        if !out.pass {
            failed += 1;
        }
        println!(
            "[{}] {:>2} {name}: {}",
            if out.pass { "PASS" } else { "FAIL" },
            i + 1,
            out.detail
        );
    }
    println!(
        "acceptance: {} passed, {failed} failed",
        criteria.len() - failed
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
