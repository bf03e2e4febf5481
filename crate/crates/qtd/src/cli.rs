//! Command-line surface.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, CommandFactory, Parser, Subcommand, ValueEnum};

use qtd_core::dilation::{dilation_result, Scenario};
use qtd_core::experiment::{builtin_scenario, estimate, ScenarioSI};
use qtd_core::pwsim::{compare, compare_mixture, BuildParams, ClockPreparation, PwModel};
use qtd_core::sweep::{default_fig2_plan, optimal_differences, run_sweep, SweepPlan};
use qtd_core::units::{natural_to_seconds, seconds_to_natural, velocity_to_momentum, velocity_width_to_momentum};

use crate::config;
use crate::error::{CliError, EXIT_USAGE};
use crate::output::{write_records, Format, Record};
use crate::sweep_io;

/// Rb-87 mass, spelled out so `--help` shows it in scientific notation.
const RB87_MASS_KG: &str = "1.443160648e-25";

#[derive(Debug, Parser)]
#[command(name = "qtd", version, about = "Quantum time dilation: closed form, oracle, sweeps and lab estimates")]
#[command(allow_negative_numbers = true)]
pub struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Human)]
    pub format: Format,
    /// Plain-text `key = value` file; flags on the command line override it.
    #[arg(long, global = true, value_name = "FILE")]
    pub config: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Average dilation of a clock in a two-packet superposition.
    Dilation(DilationArgs),
    /// K_quantum over momentum differences, with the optimal-difference trace.
    Sweep(SweepArgs),
    /// Page–Wootters oracle against the closed form.
    Oracle(OracleArgs),
    /// Laboratory feasibility of resolving the quantum contribution.
    Estimate(EstimateArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Units {
    /// Momenta in mc, times in ħ/mc².
    Natural,
    /// Velocities in m/s, times in s.
    Si,
}

#[derive(Debug, Args)]
#[command(allow_negative_numbers = true)]
pub struct DilationArgs {
    #[arg(long)]
    pub theta: f64,
    #[arg(long)]
    pub phi: f64,
    #[arg(long = "p-a")]
    pub p_a: f64,
    #[arg(long = "p-a-prime")]
    pub p_a_prime: f64,
    #[arg(long = "p-b")]
    pub p_b: f64,
    #[arg(long)]
    pub delta: f64,
    #[arg(long = "tau-b")]
    pub tau_b: f64,
    #[arg(long, value_enum, default_value_t = Units::Natural)]
    pub units: Units,
    /// Particle mass in kg, used with `--units si`.
    #[arg(long, default_value = RB87_MASS_KG)]
    pub mass: f64,
    #[arg(long, value_name = "PATH")]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
#[command(allow_negative_numbers = true)]
pub struct SweepArgs {
    /// Momentum sums, comma separated.
    #[arg(long, value_delimiter = ',', default_values_t = default_fig2_plan().betas)]
    pub betas: Vec<f64>,
    #[arg(long = "diff-start", default_value_t = default_fig2_plan().diff_start)]
    pub diff_start: f64,
    #[arg(long = "diff-end", default_value_t = default_fig2_plan().diff_end)]
    pub diff_end: f64,
    #[arg(long = "diff-step", default_value_t = default_fig2_plan().diff_step)]
    pub diff_step: f64,
    #[arg(long, default_value_t = default_fig2_plan().delta)]
    pub delta: f64,
    #[arg(long, default_value_t = default_fig2_plan().theta)]
    pub theta: f64,
    #[arg(long, default_value_t = default_fig2_plan().phi)]
    pub phi: f64,
    #[arg(long = "p-b", default_value_t = default_fig2_plan().pbar_b)]
    pub p_b: f64,
    /// Sweep table; `optimal.csv` is written next to it.
    #[arg(long, value_name = "PATH")]
    pub output: PathBuf,
    /// Also write a gnuplot script next to the table.
    #[arg(long)]
    pub plot: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Prep {
    Gaussian,
    Sharp,
}

#[derive(Debug, Args)]
#[command(allow_negative_numbers = true)]
pub struct OracleArgs {
    #[arg(long, default_value_t = std::f64::consts::FRAC_PI_4)]
    pub theta: f64,
    #[arg(long, default_value_t = 0.0)]
    pub phi: f64,
    #[arg(long = "p-a", default_value_t = 0.04)]
    pub p_a: f64,
    #[arg(long = "p-a-prime", default_value_t = 0.06)]
    pub p_a_prime: f64,
    #[arg(long = "p-b", default_value_t = 0.04)]
    pub p_b: f64,
    #[arg(long, default_value_t = 0.01)]
    pub delta: f64,
    #[arg(long = "dim-a", default_value_t = qtd_core::pwsim::DEFAULT_DIM)]
    pub dim_a: usize,
    #[arg(long = "dim-b", default_value_t = qtd_core::pwsim::DEFAULT_DIM)]
    pub dim_b: usize,
    #[arg(long = "grid-points", default_value_t = qtd_core::pwsim::DEFAULT_GRID_POINTS)]
    pub grid_points: usize,
    /// Clock level spacing in mc²; defaults to a top level of 1e-3 mc².
    #[arg(long)]
    pub epsilon: Option<f64>,
    #[arg(long = "clock-prep", value_enum, default_value_t = Prep::Gaussian)]
    pub clock_prep: Prep,
    /// Energy width of the Gaussian clock state in levels; defaults to d/16.
    #[arg(long = "clock-width")]
    pub clock_width: Option<f64>,
    #[arg(long = "time-nodes")]
    pub time_nodes: Option<usize>,
    /// Readings of clock B in ħ/mc², comma separated.
    #[arg(long = "tau-b", value_delimiter = ',', conflicts_with = "tau_b_fractions")]
    pub tau_b: Vec<f64>,
    /// Readings of clock B as fractions of its period.
    #[arg(long = "tau-b-fractions", value_delimiter = ',', default_values_t = [0.2, 0.5, 0.8])]
    pub tau_b_fractions: Vec<f64>,
    /// Also compare against the classical mixture of the two branches.
    #[arg(long)]
    pub mixture: bool,
    #[arg(long, value_name = "PATH")]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
#[command(allow_negative_numbers = true)]
pub struct EstimateArgs {
    /// Built-in scenario; explicit flags override its fields.
    #[arg(long)]
    pub scenario: Option<String>,
    #[arg(long)]
    pub mass: Option<f64>,
    #[arg(long)]
    pub v1: Option<f64>,
    #[arg(long)]
    pub v2: Option<f64>,
    #[arg(long)]
    pub theta: Option<f64>,
    #[arg(long)]
    pub phi: Option<f64>,
    #[arg(long = "delta-v")]
    pub delta_v: Option<f64>,
    #[arg(long = "tau-b")]
    pub tau_b: Option<f64>,
    #[arg(long = "transition-freq")]
    pub transition_freq: Option<f64>,
    #[arg(long = "clock-resolution")]
    pub clock_resolution: Option<f64>,
    #[arg(long = "coherence-time")]
    pub coherence_time: Option<f64>,
    #[arg(long, value_name = "PATH")]
    pub output: Option<PathBuf>,
}

/// Parses `args` (including the program name), runs the subcommand and
/// returns the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString>,
{
    let args: Vec<OsString> = args.into_iter().map(Into::into).collect();
    let merged = match config::merge(args, &Cli::command()) {
        Ok(m) => m,
        Err(e) => return report(err, e),
    };
    let cli = match Cli::try_parse_from(merged) {
        Ok(cli) => cli,
        Err(e) => {
            let rendered = e.render().to_string();
            return if e.use_stderr() {
                let _ = err.write_all(rendered.as_bytes());
                EXIT_USAGE
            } else {
                let _ = out.write_all(rendered.as_bytes());
                0
            };
        }
    };
    match execute(cli, out) {
        Ok(()) => 0,
        Err(e) => report(err, e),
    }
}

fn report(err: &mut dyn Write, e: CliError) -> u8 {
    let _ = writeln!(err, "qtd: error: {e}");
    e.exit_code()
}

fn execute(cli: Cli, out: &mut dyn Write) -> Result<(), CliError> {
    match cli.command {
        Command::Dilation(a) => emit(&cmd_dilation(&a)?, cli.format, a.output.as_deref(), out),
        Command::Sweep(a) => {
            let optima = cmd_sweep(&a)?;
            emit(&optima, cli.format, None, out)
        }
        Command::Oracle(a) => {
            let (records, all_pass) = cmd_oracle(&a)?;
            emit(&records, cli.format, a.output.as_deref(), out)?;
            if all_pass {
                Ok(())
            } else {
                Err(CliError::Failed("oracle disagrees with the closed form on at least one row".into()))
            }
        }
        Command::Estimate(a) => emit(&cmd_estimate(&a)?, cli.format, a.output.as_deref(), out),
    }
}

fn emit(records: &[Record], format: Format, path: Option<&Path>, out: &mut dyn Write) -> Result<(), CliError> {
    match path {
        Some(p) => {
            let mut buf = Vec::new();
            write_records(&mut buf, records, format).expect("in-memory write");
            fs::write(p, buf).map_err(|source| CliError::Io { path: p.to_path_buf(), source })
        }
        None => write_records(out, records, format)
            .map_err(|source| CliError::Io { path: PathBuf::from("<stdout>"), source }),
    }
}

pub fn cmd_dilation(a: &DilationArgs) -> Result<Vec<Record>, CliError> {
    let (scenario, units) = match a.units {
        Units::Natural => {
            (Scenario::from_parameters(a.theta, a.phi, a.p_a, a.p_a_prime, a.p_b, a.delta, a.tau_b)?, "natural")
        }
        Units::Si => {
            let p = |v: f64| velocity_to_momentum(v).map(|x| x.value());
            let sc = Scenario::from_parameters(
                a.theta,
                a.phi,
                p(a.p_a)?,
                p(a.p_a_prime)?,
                p(a.p_b)?,
                velocity_width_to_momentum(a.delta)?.value(),
                seconds_to_natural(a.tau_b, a.mass)?.value(),
            )?;
            (sc, "si")
        }
    };
    let r = dilation_result(&scenario)?;
    let mean_tau_a = match a.units {
        Units::Natural => r.mean_tau_a,
        Units::Si => natural_to_seconds(qtd_core::units::NaturalValue::time(r.mean_tau_a), a.mass)?,
    };
    Ok(vec![Record::new()
        .with("units", units)
        .with("k_classical", r.k_classical)
        .with("k_quantum", r.k_quantum)
        .with("gamma_eff_inv", r.gamma_eff_inv)
        .with("mean_tau_a", mean_tau_a)])
}

fn sweep_plan(a: &SweepArgs) -> SweepPlan {
    SweepPlan {
        betas: a.betas.clone(),
        diff_start: a.diff_start,
        diff_end: a.diff_end,
        diff_step: a.diff_step,
        delta: a.delta,
        theta: a.theta,
        phi: a.phi,
        pbar_b: a.p_b,
    }
}

/// Runs the sweep, writes the tables and returns the optima as records.
/// On any failure every file this call created is removed again.
pub fn cmd_sweep(a: &SweepArgs) -> Result<Vec<Record>, CliError> {
    let plan = sweep_plan(a);
    plan.validate()?;
    let rows = run_sweep(&plan)?;
    let optima = optimal_differences(&plan)?;

    let table = a.output.clone();
    let optimal = sweep_io::optimal_path(&table);
    let plot = sweep_io::plot_path(&table);
    let mut created: Vec<PathBuf> = Vec::new();
    let result = (|| {
        created.push(table.clone());
        sweep_io::emit_csv(&rows, &table)?;
        created.push(optimal.clone());
        let file = fs::File::create(&optimal).map_err(|source| CliError::Io { path: optimal.clone(), source })?;
        sweep_io::write_optima(&optima, std::io::BufWriter::new(file))
            .map_err(|e| CliError::Io { path: optimal.clone(), source: std::io::Error::other(e) })?;
        if a.plot {
            created.push(plot.clone());
            fs::write(&plot, sweep_io::plot_script(&table, &plan.betas))
                .map_err(|source| CliError::Io { path: plot.clone(), source })?;
        }
        Ok(())
    })();
    if let Err(e) = result {
        for p in &created {
            let _ = fs::remove_file(p);
        }
        return Err(e);
    }
    Ok(optima
        .iter()
        .map(|o| {
            Record::new().with("beta", o.beta).with("diff_star", o.diff_star).with("k_quantum_star", o.k_quantum_star)
        })
        .collect())
}

/// Oracle comparison rows and whether every judged row passed.
pub fn cmd_oracle(a: &OracleArgs) -> Result<(Vec<Record>, bool), CliError> {
    let sc = Scenario::from_parameters(a.theta, a.phi, a.p_a, a.p_a_prime, a.p_b, a.delta, 0.0)?;
    let clock_prep = match (a.clock_prep, a.clock_width) {
        (Prep::Sharp, None) => Some(ClockPreparation::Sharp),
        (Prep::Sharp, Some(_)) => {
            return Err(CliError::Usage("--clock-width only applies to --clock-prep gaussian".into()))
        }
        (Prep::Gaussian, Some(w)) => Some(ClockPreparation::Gaussian { width_levels: w }),
        (Prep::Gaussian, None) => None,
    };
    let params = BuildParams {
        clock_prep,
        time_nodes: a.time_nodes,
        ..BuildParams::new(a.dim_a, a.dim_b, a.grid_points, a.epsilon)
    };
    let m = PwModel::build(&sc, &params)?;
    let taus: Vec<f64> = if a.tau_b.is_empty() {
        a.tau_b_fractions.iter().map(|&f| m.tau_b_at_fraction(f)).collect()
    } else {
        a.tau_b.clone()
    };
    let pair = if a.mixture { Some(PwModel::build_mixture_pair(&sc, &params)?) } else { None };

    let mut all_pass = true;
    let mut records = Vec::with_capacity(taus.len());
    for &tau_b in &taus {
        let row = compare(&sc, &m, tau_b)?;
        all_pass &= row.pass;
        let mut rec = Record::new()
            .with("tau_b", row.tau_b)
            .with("analytic", row.analytic)
            .with("oracle", row.oracle)
            .with("abs_diff", row.abs_diff)
            .with("tolerance", row.tolerance)
            .with("spread", row.spread)
            .with("ambiguous", row.ambiguous)
            .with("pass", row.pass);
        if let Some(pair) = &pair {
            let mix = compare_mixture(&sc, &m, pair, tau_b)?;
            all_pass &= mix.pass.unwrap_or(true);
            let verdict = match mix.pass {
                Some(true) => "pass",
                Some(false) => "fail",
                None => "skipped",
            };
            rec = rec
                .with("mixture", mix.mixture)
                .with("sup_minus_mix", mix.difference)
                .with("minus_kq_tau_b", mix.expected)
                .with("relative_error", mix.relative_error)
                .with("mixture_check", verdict);
        }
        records.push(rec);
    }
    Ok((records, all_pass))
}

fn si_scenario(a: &EstimateArgs) -> Result<(String, ScenarioSI), CliError> {
    let (name, base) = match &a.scenario {
        Some(name) => (name.clone(), Some(builtin_scenario(name)?)),
        None => ("custom".to_owned(), None),
    };
    let defaults = builtin_scenario("rb87-default")?;
    let required = |flag: &str, v: Option<f64>, from_base: Option<f64>| {
        v.or(from_base).ok_or_else(|| CliError::Usage(format!("--{flag} is required without --scenario")))
    };
    let sc = ScenarioSI {
        mass: a.mass.or(base.map(|b| b.mass)).unwrap_or(defaults.mass),
        v1: required("v1", a.v1, base.map(|b| b.v1))?,
        v2: required("v2", a.v2, base.map(|b| b.v2))?,
        theta: a.theta.or(base.map(|b| b.theta)).unwrap_or(defaults.theta),
        phi: a.phi.or(base.map(|b| b.phi)).unwrap_or(defaults.phi),
        delta_v: required("delta-v", a.delta_v, base.map(|b| b.delta_v))?,
        tau_b: required("tau-b", a.tau_b, base.map(|b| b.tau_b))?,
        transition_freq: a.transition_freq.or(base.map(|b| b.transition_freq)).unwrap_or(defaults.transition_freq),
        clock_resolution: a.clock_resolution.or(base.map(|b| b.clock_resolution)).unwrap_or(defaults.clock_resolution),
        coherence_time: a.coherence_time.or(base.map(|b| b.coherence_time)).unwrap_or(defaults.coherence_time),
    };
    sc.validate()?;
    Ok((name, sc))
}

pub fn cmd_estimate(a: &EstimateArgs) -> Result<Vec<Record>, CliError> {
    let (name, sc) = si_scenario(a)?;
    let r = estimate(&sc)?;
    Ok(vec![Record::new()
        .with("scenario", name.as_str())
        .with("mass", sc.mass)
        .with("v1", sc.v1)
        .with("v2", sc.v2)
        .with("theta", sc.theta)
        .with("phi", sc.phi)
        .with("delta_v", sc.delta_v)
        .with("tau_b", sc.tau_b)
        .with("transition_freq", sc.transition_freq)
        .with("clock_resolution", r.clock_resolution)
        .with("coherence_time", r.coherence_time)
        .with("k_classical", r.k_classical)
        .with("k_quantum", r.k_quantum)
        .with("gamma_eff_inv", r.gamma_eff_inv)
        .with("effective_tau_b", r.effective_tau_b)
        .with("time_shift_quantum", r.time_shift_quantum)
        .with("resonance_shift", r.resonance_shift)
        .with("nu_lab", r.nu_lab)
        .with("margin", r.margin)
        .with("detectable", r.detectable)])
}
