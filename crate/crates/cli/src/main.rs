//! `pmqoc` — design and vet drive fields for inhomogeneously broadened
//! two-level ensembles: multi-start pulse optimization, objective
//! evaluation, robustness maps, dephasing sweeps, XY-8 decoupling
//! simulation and envelope spectra.
//!
//! Every command reads an optional `--config` JSON file, applies flags on
//! top, writes its data files plus a `manifest.json` into a run directory,
//! and is byte-reproducible for a fixed configuration and seed (timestamps
//! appear only in the manifest). Frequencies at this boundary are ordinary
//! MHz; dephasing rates are ordinary 1/s quoted in MHz (no 2π); durations
//! are ns/µs per flag name.
//!
//! Exit codes: 0 success, 2 configuration error, 3 numeric failure (the
//! outputs written before the failure, and the manifest, stay on disk).

mod commands;
mod config;
mod error;
mod manifest;

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::{json, Value};

use crate::config::{
    load_config, DdConfig, EvalConfig, MapConfig, OptimizeConfig, SpectrumCmdConfig, SweepConfig,
};
use crate::error::CliError;
use crate::manifest::RunDir;

#[derive(Parser)]
#[command(
    name = "pmqoc",
    version,
    about = "Pulse design and evaluation for driven two-level ensembles"
)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Multi-start pulse-shape optimization
    Optimize(OptimizeArgs),
    /// Evaluate a field document against the ensemble objective
    Eval(EvalArgs),
    /// Detuning × amplitude fidelity map (optionally comparing two fields)
    Map(MapArgs),
    /// Ensemble fidelity versus pure-dephasing rate
    Sweep(SweepArgs),
    /// XY-8 dynamical-decoupling decay curve and T2 estimate
    Dd(DdArgs),
    /// Spectral decomposition of a field's complex envelope
    Spectrum(SpectrumArgs),
}

#[derive(Args)]
struct CommonArgs {
    /// JSON config file; command-line flags override its entries
    #[arg(long, value_name = "FILE")]
    config: Option<PathBuf>,
    /// Run directory (default: runs/<UTC timestamp>-<command>/)
    #[arg(long, value_name = "DIR")]
    out_dir: Option<PathBuf>,
    /// Master seed for every stochastic component
    #[arg(long, default_value_t = 7)]
    seed: u64,
    /// Cap on worker threads (default: all cores)
    #[arg(long)]
    threads: Option<usize>,
}

#[derive(Args)]
struct OptimizeArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Drive-field family: sfb, sfb_p, sfb_p2 or pm
    #[arg(long)]
    family: Option<String>,
    /// Number of basis terms
    #[arg(long = "N")]
    n: Option<usize>,
    /// Pulse duration (ns)
    #[arg(long = "T-ns")]
    t_ns: Option<f64>,
    /// Ensemble detuning FWHM (MHz)
    #[arg(long = "W-MHz")]
    w_mhz: Option<f64>,
    /// Peak-amplitude cap (MHz)
    #[arg(long = "Omega-max-MHz")]
    omega_max_mhz: Option<f64>,
    /// Detuning-grid size of the averaged objective
    #[arg(long = "M")]
    m_grid: Option<usize>,
    /// Monte-Carlo draw count recorded for downstream evaluation
    #[arg(long = "K")]
    k_draws: Option<usize>,
    /// Pure-dephasing rate during optimization (MHz, ordinary rate)
    #[arg(long = "gamma-MHz")]
    gamma_mhz: Option<f64>,
    /// Objective: transfer or gate
    #[arg(long)]
    objective: Option<String>,
    /// Gate target: pauli_x, pauli_y, pauli_z or hadamard
    #[arg(long)]
    target: Option<String>,
    /// Number of independent starts
    #[arg(long)]
    starts: Option<usize>,
    /// Evaluation budget per start (default: 200 per free parameter)
    #[arg(long)]
    budget: Option<usize>,
    /// Draw frequency-like coordinates randomly and freeze them
    #[arg(long)]
    randomize_freqs: bool,
    /// Propagation step (ns); default T/2000
    #[arg(long = "dt-ns")]
    dt_ns: Option<f64>,
}

#[derive(Args)]
struct EvalArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Field document to evaluate
    #[arg(long)]
    field: Option<PathBuf>,
    #[arg(long = "W-MHz")]
    w_mhz: Option<f64>,
    #[arg(long = "M")]
    m_grid: Option<usize>,
    #[arg(long = "K")]
    k_draws: Option<usize>,
    #[arg(long = "gamma-MHz")]
    gamma_mhz: Option<f64>,
    /// Objective: transfer or gate
    #[arg(long)]
    objective: Option<String>,
    /// Gate target: pauli_x, pauli_y, pauli_z or hadamard
    #[arg(long)]
    target: Option<String>,
    #[arg(long = "dt-ns")]
    dt_ns: Option<f64>,
}

#[derive(Args)]
struct MapArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Field document to map
    #[arg(long)]
    field: Option<PathBuf>,
    /// Second field for an area-ratio comparison on the shared grid
    #[arg(long)]
    field2: Option<PathBuf>,
    /// Fidelity threshold for the area metric
    #[arg(long)]
    threshold: Option<f64>,
    #[arg(long = "gamma-MHz")]
    gamma_mhz: Option<f64>,
    /// Detuning half-span (MHz): the grid covers [−span, +span]
    #[arg(long = "delta-span-MHz")]
    delta_span_mhz: Option<f64>,
    #[arg(long)]
    delta_points: Option<usize>,
    #[arg(long)]
    alpha_min: Option<f64>,
    #[arg(long)]
    alpha_max: Option<f64>,
    #[arg(long)]
    alpha_points: Option<usize>,
    #[arg(long = "dt-ns")]
    dt_ns: Option<f64>,
}

#[derive(Args)]
struct SweepArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Field document to sweep
    #[arg(long)]
    field: Option<PathBuf>,
    #[arg(long = "W-MHz")]
    w_mhz: Option<f64>,
    #[arg(long = "M")]
    m_grid: Option<usize>,
    /// Monte-Carlo draws per dephasing rate
    #[arg(long = "K")]
    k_draws: Option<usize>,
    #[arg(long = "gamma-min-MHz")]
    gamma_min_mhz: Option<f64>,
    #[arg(long = "gamma-max-MHz")]
    gamma_max_mhz: Option<f64>,
    #[arg(long)]
    gamma_points: Option<usize>,
    #[arg(long = "dt-ns")]
    dt_ns: Option<f64>,
}

#[derive(Args)]
struct DdArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// π-pulse implementation: rect or optimized
    #[arg(long)]
    pulse: Option<String>,
    /// Rectangular-pulse amplitude (MHz)
    #[arg(long = "Omega-MHz")]
    omega_mhz: Option<f64>,
    /// π-pulse duration (ns); default 50 for rect, field duration for
    /// optimized
    #[arg(long = "Tpulse-ns")]
    tpulse_ns: Option<f64>,
    /// X-pulse field document (optimized pulses)
    #[arg(long = "field-x")]
    field_x: Option<PathBuf>,
    /// Y-pulse field document (optimized pulses)
    #[arg(long = "field-y")]
    field_y: Option<PathBuf>,
    #[arg(long = "tau-min-us")]
    tau_min_us: Option<f64>,
    #[arg(long = "tau-max-us")]
    tau_max_us: Option<f64>,
    #[arg(long)]
    tau_points: Option<usize>,
    /// Noise trajectories per point
    #[arg(long)]
    trials: Option<usize>,
    #[arg(long = "dt-ns")]
    dt_ns: Option<f64>,
    /// Drift correlation time (µs)
    #[arg(long = "noise-tau-us")]
    noise_tau_us: Option<f64>,
    /// Stationary standard deviation of the drift (MHz)
    #[arg(long = "ou-std-MHz")]
    ou_std_mhz: Option<f64>,
    /// FWHM of the per-trial static detuning (MHz)
    #[arg(long = "static-FWHM-MHz")]
    static_fwhm_mhz: Option<f64>,
    #[arg(long = "gamma-MHz")]
    gamma_mhz: Option<f64>,
}

#[derive(Args)]
struct SpectrumArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Field document to analyze
    #[arg(long)]
    field: Option<PathBuf>,
    /// Retained band around the carrier (MHz)
    #[arg(long = "band-MHz")]
    band_mhz: Option<f64>,
    /// Number of envelope samples (power of two ≥ 4096)
    #[arg(long)]
    samples: Option<usize>,
    /// Count spectral components with amplitude ≥ this (MHz)
    #[arg(long = "threshold-MHz")]
    threshold_mhz: Option<f64>,
}

macro_rules! override_fields {
    ($cfg:expr, $args:expr, $($field:ident),+ $(,)?) => {
        $(if let Some(v) = $args.$field.clone() {
            $cfg.$field = v;
        })+
    };
}

macro_rules! override_options {
    ($cfg:expr, $args:expr, $($field:ident),+ $(,)?) => {
        $(if $args.$field.is_some() {
            $cfg.$field = $args.$field.clone();
        })+
    };
}

fn merged_optimize(args: &OptimizeArgs) -> Result<OptimizeConfig, CliError> {
    let mut cfg: OptimizeConfig = load_config(args.common.config.as_deref())?;
    override_fields!(cfg, args, family, t_ns, w_mhz, omega_max_mhz, m_grid, k_draws, gamma_mhz, objective, starts);
    if let Some(v) = args.n {
        cfg.n_terms = v;
    }
    override_options!(cfg, args, target, budget, dt_ns);
    if args.randomize_freqs {
        cfg.randomize_freqs = true;
    }
    Ok(cfg)
}

fn merged_eval(args: &EvalArgs) -> Result<EvalConfig, CliError> {
    let mut cfg: EvalConfig = load_config(args.common.config.as_deref())?;
    override_fields!(cfg, args, w_mhz, m_grid, k_draws, gamma_mhz, objective);
    override_options!(cfg, args, field, target, dt_ns);
    Ok(cfg)
}

fn merged_map(args: &MapArgs) -> Result<MapConfig, CliError> {
    let mut cfg: MapConfig = load_config(args.common.config.as_deref())?;
    override_fields!(
        cfg, args, threshold, gamma_mhz, delta_span_mhz, delta_points, alpha_min, alpha_max,
        alpha_points
    );
    override_options!(cfg, args, field, field2, dt_ns);
    Ok(cfg)
}

fn merged_sweep(args: &SweepArgs) -> Result<SweepConfig, CliError> {
    let mut cfg: SweepConfig = load_config(args.common.config.as_deref())?;
    override_fields!(cfg, args, w_mhz, m_grid, k_draws, gamma_min_mhz, gamma_max_mhz, gamma_points);
    override_options!(cfg, args, field, dt_ns);
    Ok(cfg)
}

fn merged_dd(args: &DdArgs) -> Result<DdConfig, CliError> {
    let mut cfg: DdConfig = load_config(args.common.config.as_deref())?;
    override_fields!(
        cfg, args, pulse, omega_mhz, tau_min_us, tau_max_us, tau_points, trials, dt_ns,
        noise_tau_us, ou_std_mhz, static_fwhm_mhz, gamma_mhz
    );
    override_options!(cfg, args, tpulse_ns, field_x, field_y);
    Ok(cfg)
}

fn merged_spectrum(args: &SpectrumArgs) -> Result<SpectrumCmdConfig, CliError> {
    let mut cfg: SpectrumCmdConfig = load_config(args.common.config.as_deref())?;
    override_fields!(cfg, args, band_mhz, samples);
    override_options!(cfg, args, field, threshold_mhz);
    Ok(cfg)
}

/// Shared command lifecycle: validate and plan (exit 2 on failure, nothing
/// written), create the run directory, compute and persist, then write the
/// manifest whatever the outcome so partial outputs stay accounted for.
fn execute<C: Serialize, P>(
    name: &str,
    common: &CommonArgs,
    cfg: &C,
    plan: impl FnOnce(&C, u64) -> Result<P, CliError>,
    run: impl FnOnce(&P, u64, &mut RunDir) -> Result<Value, CliError>,
) -> Result<(), CliError> {
    let seed = common.seed;
    let plan = plan(cfg, seed)?;
    let mut dir = RunDir::create(common.out_dir.as_deref(), name)?;
    let outcome = run(&plan, seed, &mut dir);
    let stats = match &outcome {
        Ok(v) => v.clone(),
        Err(e) => json!({ "error": e.to_string() }),
    };
    let config_echo = serde_json::to_value(cfg).expect("config serializes");
    let root = dir.finish(name, seed, common.threads, config_echo, stats)?;
    println!("run directory: {}", root.display());
    outcome.map(|_| ())
}

fn dispatch(cli: Cli) -> Result<(), CliError> {
    match &cli.command {
        Cmd::Optimize(args) => {
            let cfg = merged_optimize(args)?;
            execute("optimize", &args.common, &cfg, commands::plan_optimize, |p, _, d| {
                commands::run_optimize(p, d)
            })
        }
        Cmd::Eval(args) => {
            let cfg = merged_eval(args)?;
            execute("eval", &args.common, &cfg, commands::plan_eval, |p, s, d| {
                commands::run_eval(p, s, d)
            })
        }
        Cmd::Map(args) => {
            let cfg = merged_map(args)?;
            execute("map", &args.common, &cfg, commands::plan_map, |p, _, d| {
                commands::run_map(p, d)
            })
        }
        Cmd::Sweep(args) => {
            let cfg = merged_sweep(args)?;
            execute("sweep", &args.common, &cfg, commands::plan_sweep, |p, s, d| {
                commands::run_sweep(p, s, d)
            })
        }
        Cmd::Dd(args) => {
            let cfg = merged_dd(args)?;
            execute("dd", &args.common, &cfg, commands::plan_dd, |p, s, d| {
                commands::run_dd(p, s, d)
            })
        }
        Cmd::Spectrum(args) => {
            let cfg = merged_spectrum(args)?;
            execute("spectrum", &args.common, &cfg, commands::plan_spectrum, |p, _, d| {
                commands::run_spectrum(p, d)
            })
        }
    }
}

fn init_threads(cli: &Cli) -> Result<(), CliError> {
    let common = match &cli.command {
        Cmd::Optimize(a) => &a.common,
        Cmd::Eval(a) => &a.common,
        Cmd::Map(a) => &a.common,
        Cmd::Sweep(a) => &a.common,
        Cmd::Dd(a) => &a.common,
        Cmd::Spectrum(a) => &a.common,
    };
    if let Some(n) = common.threads {
        if n == 0 {
            return Err(CliError::Config("--threads must be ≥ 1".into()));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| CliError::Config(format!("cannot configure {n} threads: {e}")))?;
    }
    Ok(())
}

fn main() {
    let cli = Cli::parse();
    let result = init_threads(&cli).and_then(|()| dispatch(cli));
    if let Err(e) = result {
        eprintln!("{e}");
        std::process::exit(e.exit_code());
    }
}
