//! Acceptance criteria, one pass/fail line each. Runs as a plain binary so the
//! verdict lines are always printed.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, TAU};
use std::fs;
use std::path::Path;
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use qtd_core::dilation::{dilation_result, gamma_factor, k_classical, k_quantum, Scenario};
use qtd_core::experiment::{builtin_scenario, estimate};
use qtd_core::pwsim::{
    compare, compare_mixture, conditional_distribution, uncertainty_for_state, Applicability, BuildParams, FiniteClock,
    PwModel,
};
use qtd_core::sweep::{default_fig2_plan, optimal_difference, packet_centres, run_sweep, RowStatus};
use qtd_core::wavepacket::{second_moment, SuperpositionSpec};

type Criterion = (&'static str, fn() -> Verdict);

struct Verdict {
    pass: bool,
    detail: String,
}

fn check(pass: bool, detail: String) -> Verdict {
    Verdict { pass, detail }
}

fn within(limit: Duration, elapsed: Duration) -> bool {
    elapsed <= limit
}

fn moment_identity() -> Verdict {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(0x51ab);
    let mut draws = 0;
    let mut worst = 0.0f64;
    while draws < 2000 {
        let (p, pp, pb) = (rng.gen_range(-0.1..0.1), rng.gen_range(-0.1..0.1), rng.gen_range(-0.1..0.1));
        let delta = rng.gen_range(0.001..0.05);
        let theta = rng.gen_range(0.0..=FRAC_PI_2);
        let phi = rng.gen_range(0.0..TAU);
        let Ok(s) = SuperpositionSpec::from_momenta(theta, phi, p, pp, delta) else { continue };
        if s.normalization().unwrap() < 1e-6 {
            continue;
        }
        let lhs = k_classical(theta, p, pp, pb) + k_quantum(&s).unwrap();
        let rhs = (second_moment(&s).unwrap() - delta * delta / 2.0 - pb * pb) / 2.0;
        worst = worst.max((lhs - rhs).abs());
        draws += 1;
    }
    let t = start.elapsed();
    check(
        worst <= 1e-9 && within(Duration::from_secs(5), t),
        format!("{draws} draws, max |gap| = {worst:.3e} (<= 1e-9), {t:.2?} (< 5 s)"),
    )
}

fn classical_baseline() -> Verdict {
    let start = Instant::now();
    let mut worst_ratio = 0.0f64;
    let n = 41;
    for i in 0..n {
        for j in 0..n {
            let pa = -0.05 + 0.1 * i as f64 / (n - 1) as f64;
            let pb = -0.05 + 0.1 * j as f64 / (n - 1) as f64;
            let sc = Scenario::from_parameters(0.0, 0.0, pa, 0.3, pb, 0.01, 1.0).unwrap();
            let r = dilation_result(&sc).unwrap();
            let gap = ((1.0 - r.k_classical) - gamma_factor(pb) / gamma_factor(pa)).abs();
            let bound = 2.0 * pa.abs().max(pb.abs()).powi(4);
            let ratio = if bound > 0.0 {
                gap / bound
            } else if gap == 0.0 {
                0.0
            } else {
                f64::INFINITY
            };
            worst_ratio = worst_ratio.max(ratio);
        }
    }
    let t = start.elapsed();
    check(
        worst_ratio <= 1.0 && within(Duration::from_secs(1), t),
        format!("{} pairs, max gap / 2p^4 = {worst_ratio:.3} (<= 1), {t:.2?} (< 1 s)", n * n),
    )
}

fn oracle_scenario() -> Scenario {
    Scenario::from_parameters(FRAC_PI_4, 0.0, 0.04, 0.06, 0.04, 0.01, 0.0).unwrap()
}

const FRACTIONS: [f64; 3] = [0.2, 0.5, 0.8];

fn oracle_agreement() -> Verdict {
    let start = Instant::now();
    let sc = oracle_scenario();
    let m = PwModel::build(&sc, &BuildParams::default()).unwrap();
    let mut all = true;
    let mut worst = 0.0f64;
    for f in FRACTIONS {
        let tau_b = m.tau_b_at_fraction(f);
        let row = compare(&sc, &m, tau_b).unwrap();
        all &= row.abs_diff <= row.tolerance && !row.ambiguous;
        worst = worst.max(row.abs_diff / tau_b);
    }
    let t = start.elapsed();
    check(
        all && within(Duration::from_secs(120), t),
        format!(
            "d = 64, 256 grid points, 3 readings, max |oracle - analytic| / tau_B = {worst:.3e} (<= 3e-6), {t:.2?}"
        ),
    )
}

fn mixture_separation() -> Verdict {
    let start = Instant::now();
    let sc = oracle_scenario();
    let params = BuildParams::default();
    let m = PwModel::build(&sc, &params).unwrap();
    let pair = PwModel::build_mixture_pair(&sc, &params).unwrap();
    let mut all = true;
    let mut worst = 0.0f64;
    for f in FRACTIONS {
        let row = compare_mixture(&sc, &m, &pair, m.tau_b_at_fraction(f)).unwrap();
        all &= row.pass == Some(true);
        worst = worst.max(row.relative_error);
    }
    let kq = dilation_result(&sc).unwrap().k_quantum;
    let t = start.elapsed();
    check(
        all && within(Duration::from_secs(240), t),
        format!("K_q = {kq:.5e}, max relative error of (sup - mix) vs -K_q tau_B = {worst:.4} (<= 0.1), {t:.2?}"),
    )
}

fn fig2_shape() -> Verdict {
    let start = Instant::now();
    let plan = default_fig2_plan();
    let rows = run_sweep(&plan).unwrap();
    let mut ok = true;
    let mut notes = Vec::new();
    let mut worst_steps = 0.0f64;
    for &beta in &plan.betas {
        let slice: Vec<_> = rows.iter().filter(|r| r.beta == beta).collect();
        ok &= slice.iter().all(|r| r.status == RowStatus::Ok);
        let mags: Vec<f64> = slice.iter().map(|r| r.k_quantum.abs()).collect();
        ok &= mags[0] == 0.0;
        ok &= slice.iter().filter(|r| r.diff >= 40.0 * plan.delta - 1e-12).all(|r| r.k_quantum.abs() < 1e-40);
        let peak = mags.iter().enumerate().max_by(|a, b| a.1.total_cmp(b.1)).unwrap().0;
        let rising = mags[..=peak].windows(2).all(|w| w[1] > w[0]);
        let falling = mags[peak..].windows(2).all(|w| w[1] <= w[0]);
        ok &= peak > 0 && peak < mags.len() - 1 && rising && falling;

        let opt = optimal_difference(beta, plan.delta, plan.theta, plan.phi, (plan.diff_start, plan.diff_end)).unwrap();
        let step = 1e-5;
        let n = ((plan.diff_end - plan.diff_start) / step).round() as usize;
        let mut best = (0.0, -1.0);
        for i in 0..=n {
            let d = plan.diff_start + i as f64 * step;
            let (p, pp) = packet_centres(beta, d);
            let v = SuperpositionSpec::from_momenta(plan.theta, plan.phi, p, pp, plan.delta)
                .and_then(|s| k_quantum(&s))
                .map(f64::abs)
                .unwrap_or(0.0);
            if v > best.1 {
                best = (d, v);
            }
        }
        let steps = (opt.diff_star - best.0).abs() / step;
        worst_steps = worst_steps.max(steps);
        ok &= steps <= 2.0;
        notes.push(format!("beta {beta}: diff* = {:.6}", opt.diff_star));
    }
    let t = start.elapsed();
    check(
        ok && within(Duration::from_secs(10), t),
        format!(
            "{}; unimodal, zero at 0 and beyond 40 Delta; optimum within {worst_steps:.2} fine steps (<= 2), {t:.2?}",
            notes.join(", ")
        ),
    )
}

fn experimental_magnitude() -> Verdict {
    let sc = builtin_scenario("rb87-default").unwrap();
    let r = estimate(&sc).unwrap();
    let shift = r.time_shift_quantum.abs();
    let in_band = (1e-16..=1e-14).contains(&shift) && (1e-16..=1e-14).contains(&r.k_quantum.abs());
    let verdict_consistent = r.detectable == (shift >= 1e-14) && sc.clock_resolution == 1e-14;
    check(
        in_band && verdict_consistent && sc.tau_b == 10.0,
        format!(
            "|tau_B K_q| = {shift:.3e} s at tau_B = 10 s (|K_q| = {:.3e}), detectable at 1e-14 s: {}",
            r.k_quantum.abs(),
            r.detectable
        ),
    )
}

fn clock_invariants() -> Verdict {
    let start = Instant::now();
    let mut ok = true;
    let (mut roi, mut cov, mut norm) = (0.0f64, 0.0f64, 0.0f64);
    let sc = Scenario::from_parameters(0.6, 0.3, 0.01, 0.04, 0.02, 0.01, 0.0).unwrap();
    for d in [8usize, 32, 64] {
        let clock = FiniteClock::new(d, 1e-3 / (d - 1) as f64).unwrap();
        roi = roi.max(clock.resolution_of_identity_error());
        let step = clock.period() / d as f64;
        for k in 0..d {
            for j in [1, d / 2 + 1, d - 1] {
                let mut s = clock.grid_state(k);
                clock.evolve(&mut s, j as f64 * step);
                let target = clock.grid_state((k + j) % d);
                cov = cov.max(s.iter().zip(&target).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max));
            }
        }
        let params = BuildParams::new(d, d, 192, None);
        let m = PwModel::build(&sc, &params).unwrap();
        let shifted = PwModel::build(&sc, &BuildParams { initial_reading: 3.0 * step, ..params }).unwrap();
        for f in [0.1, 0.6] {
            let tau_b = m.tau_b_at_fraction(f);
            let a = conditional_distribution(&m, tau_b).unwrap();
            let b = conditional_distribution(&shifted, tau_b + 3.0 * step).unwrap();
            norm = norm.max((a.total_probability() - 1.0).abs()).max((b.total_probability() - 1.0).abs());
            for k in 0..d {
                cov = cov.max((a.probabilities()[k] - b.probabilities()[(k + 3) % d]).abs());
            }
        }
    }
    ok &= roi <= 1e-10 && cov <= 1e-12 && norm <= 1e-9;
    let t = start.elapsed();
    check(
        ok && within(Duration::from_secs(10), t),
        format!(
            "d in {{8, 32, 64}}: identity error {roi:.1e} (<= 1e-10), covariance error {cov:.1e} (<= 1e-12), \
             normalization error {norm:.1e} (<= 1e-9), {t:.2?}"
        ),
    )
}

fn uncertainty_bound() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(0x7e57);
    let mut applicable = 0;
    let mut skipped = 0;
    let mut worst = f64::INFINITY;
    let mut attempts = 0;
    while applicable < 200 && attempts < 10_000 {
        attempts += 1;
        let d = [32usize, 64][rng.gen_range(0..2)];
        let clock = FiniteClock::new(d, 1e-3 / (d - 1) as f64).unwrap();
        let centre = (d - 1) as f64 / 2.0 + rng.gen_range(-2.0..2.0);
        let width = rng.gen_range(1.2..0.06 * d as f64);
        let tau = rng.gen_range(0.0..TAU);
        let chirp = rng.gen_range(-0.05..0.05);
        // smooth random state: Gaussian envelope times low-order Hermite modes
        let modes: Vec<Complex64> =
            (0..3).map(|_| Complex64::from_polar(rng.gen_range(0.0..0.4), rng.gen_range(0.0..TAU))).collect();
        let state: Vec<Complex64> = (0..d)
            .map(|n| {
                let x = n as f64 - centre;
                let u = x / (2.0f64.sqrt() * width);
                let poly = Complex64::new(1.0, 0.0)
                    + modes[0] * (2.0 * u)
                    + modes[1] * (4.0 * u * u - 2.0)
                    + modes[2] * (8.0 * u * u * u - 12.0 * u);
                poly * Complex64::from_polar((-x * x / (4.0 * width * width)).exp(), -tau * n as f64 + chirp * x * x)
            })
            .collect();
        let r = uncertainty_for_state(&clock, &state);
        if r.applicability == Applicability::Applicable {
            applicable += 1;
            worst = worst.min(r.product / r.bound);
        } else {
            skipped += 1;
        }
    }
    check(
        applicable >= 100 && worst >= 0.9,
        format!("{applicable} applicable states ({skipped} skipped), min product / (hbar/2c^2) = {worst:.4} (>= 0.9)"),
    )
}

fn run_bin(args: &[&str]) -> (Option<i32>, Vec<u8>) {
    let out = Command::new(env!("CARGO_BIN_EXE_qtd")).args(args).output().expect("spawn qtd");
    (out.status.code(), out.stdout)
}

fn determinism() -> Verdict {
    let dir = tempfile::tempdir().unwrap();
    let table = |i: usize| dir.path().join(format!("run{i}")).join("fig2.csv");
    let mut ok = true;
    let mut checked = Vec::new();
    for format in ["csv", "json-lines"] {
        let cases: Vec<(&str, Vec<&str>)> = vec![
            (
                "dilation",
                vec![
                    "dilation",
                    "--theta",
                    "0.7853981633974483",
                    "--phi",
                    "0",
                    "--p-a",
                    "0.04",
                    "--p-a-prime",
                    "0.06",
                    "--p-b",
                    "0.04",
                    "--delta",
                    "0.01",
                    "--tau-b",
                    "1",
                ],
            ),
            ("estimate", vec!["estimate", "--scenario", "rb87-default"]),
            ("oracle", vec!["oracle", "--dim-a", "16", "--dim-b", "16", "--grid-points", "160", "--mixture"]),
        ];
        for (name, args) in cases {
            let mut full = vec!["--format", format];
            full.extend(args);
            let a = run_bin(&full);
            let b = run_bin(&full);
            ok &= a.0 == Some(0) && a == b && !a.1.is_empty();
            checked.push(format!("{name}/{format}"));
        }
        let mut outs = Vec::new();
        for i in 0..2 {
            let t = table(i);
            fs::create_dir_all(t.parent().unwrap()).unwrap();
            let (code, stdout) = run_bin(&["--format", format, "sweep", "--output", t.to_str().unwrap(), "--plot"]);
            ok &= code == Some(0);
            let read = |p: &Path| fs::read(p).unwrap_or_default();
            outs.push((stdout, read(&t), read(&t.with_file_name("optimal.csv")), read(&t.with_extension("gp"))));
        }
        ok &= outs[0] == outs[1] && !outs[0].1.is_empty();
        checked.push(format!("sweep/{format}"));
    }
    check(ok, format!("byte-identical across two runs: {}", checked.join(", ")))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 9] = [
        ("moment identity", moment_identity),
        ("classical baseline", classical_baseline),
        ("oracle agreement", oracle_agreement),
        ("quantum vs mixture", mixture_separation),
        ("fig. 2 shape", fig2_shape),
        ("experimental magnitude", experimental_magnitude),
        ("clock invariants", clock_invariants),
        ("uncertainty diagnostic", uncertainty_bound),
        ("determinism", determinism),
    ];
    let mut failures = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let v = f();
        println!("criterion {} [{name}]: {} - {}", i + 1, if v.pass { "PASS" } else { "FAIL" }, v.detail);
        if !v.pass {
            failures += 1;
        }
    }
    println!("acceptance: {}/{} passed", criteria.len() - failures, criteria.len());
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
