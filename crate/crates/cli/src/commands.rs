//! The six subcommands. Each one is split into a `plan_*` phase that
//! validates the resolved configuration and loads input documents (all
//! failures there are configuration errors, exit 2, no run directory is
//! touched) and a `run_*` phase that computes, writes the data files and
//! returns the stats object for the manifest (failures there are numeric,
//! exit 3, with whatever outputs already exist preserved on disk).

use std::fs;
use std::path::PathBuf;

use serde_json::{json, Value};

use pmqoc_core::basis::{
    count_components, spectrum, ConstraintSet, ControlFamily, ControlField, FieldDocument,
    Spectrum,
};
use pmqoc_core::ddsim::{decay_curve, extract_t2, PulseImpl, T2_THRESHOLD};
use pmqoc_core::dynamics::{EnsembleModel, NoiseModel};
use pmqoc_core::objective::{
    average_fidelity, monte_carlo_fidelity, ObjectiveSpec, PEAK_GRID_POINTS,
};
use pmqoc_core::optimizer::{field_of_record, optimize_family, OptimizationSpec};
use pmqoc_core::robustness::{dephasing_sweep, fidelity_map, linspace, sweep_to_csv};
use pmqoc_core::twolevel::{PureState, Unitary2};
use pmqoc_core::units::{mhz_to_rad, mhz_to_rate, ns_to_s, rad_to_mhz, s_to_ns, s_to_us, us_to_s};

use crate::config::{
    DdConfig, EvalConfig, MapConfig, OptimizeConfig, SpectrumCmdConfig, SweepConfig,
};
use crate::error::CliError;
use crate::manifest::RunDir;

fn config_err(msg: impl Into<String>) -> CliError {
    CliError::Config(msg.into())
}

fn check(cond: bool, msg: impl Into<String>) -> Result<(), CliError> {
    if cond {
        Ok(())
    } else {
        Err(config_err(msg))
    }
}

/// Loads a field document named by a config entry; every failure names the
/// flag and the file.
fn load_field(path: &Option<PathBuf>, flag: &str) -> Result<ControlField, CliError> {
    let Some(path) = path else {
        return Err(config_err(format!(
            "missing --{flag} (or \"{}\" in the config file)",
            flag.replace('-', "_")
        )));
    };
    let text = fs::read_to_string(path)
        .map_err(|e| config_err(format!("{}: {e}", path.display())))?;
    let doc = FieldDocument::from_json(&text)
        .map_err(|e| config_err(format!("{}: {e}", path.display())))?;
    doc.to_field()
        .map_err(|e| config_err(format!("{}: {e}", path.display())))
}

fn parse_target(name: &str) -> Result<Unitary2, CliError> {
    match name {
        "pauli_x" => Ok(Unitary2::pauli_x()),
        "pauli_y" => Ok(Unitary2::pauli_y()),
        "pauli_z" => Ok(Unitary2::pauli_z()),
        "hadamard" => Ok(Unitary2::hadamard()),
        other => Err(config_err(format!(
            "unknown gate target '{other}' (expected pauli_x, pauli_y, pauli_z or hadamard)"
        ))),
    }
}

fn build_ensemble(w_mhz: f64, m_grid: usize, k_draws: usize) -> Result<EnsembleModel, CliError> {
    check(w_mhz > 0.0, format!("ensemble FWHM must be > 0 MHz, got {w_mhz}"))?;
    EnsembleModel::from_fwhm(mhz_to_rad(w_mhz), m_grid, k_draws)
        .map_err(|e| config_err(e.to_string()))
}

/// Assembles and validates the evaluation objective shared by optimize,
/// eval and sweep.
fn build_objective(
    objective: &str,
    target: &Option<String>,
    ensemble: EnsembleModel,
    t_total: f64,
    gamma_mhz: f64,
    dt_ns: Option<f64>,
) -> Result<ObjectiveSpec, CliError> {
    check(
        gamma_mhz >= 0.0,
        format!("dephasing rate must be ≥ 0 MHz, got {gamma_mhz}"),
    )?;
    let mut spec = match objective {
        "transfer" => ObjectiveSpec::state_transfer(PureState::up(), ensemble, t_total),
        "gate" => {
            let Some(name) = target else {
                return Err(config_err("the gate objective requires --target"));
            };
            ObjectiveSpec::gate(parse_target(name)?, ensemble, t_total)
        }
        other => {
            return Err(config_err(format!(
                "unknown objective '{other}' (expected transfer or gate)"
            )))
        }
    };
    if gamma_mhz > 0.0 {
        spec = spec.with_gamma(mhz_to_rate(gamma_mhz));
    }
    if let Some(dt) = dt_ns {
        check(dt > 0.0, format!("dt must be > 0 ns, got {dt}"))?;
        spec = spec.with_dt(ns_to_s(dt));
    }
    spec.validate().map_err(|e| config_err(e.to_string()))?;
    Ok(spec)
}

fn amplitude_stats(field: &ControlField) -> Result<(f64, f64), CliError> {
    let ave = field.average_amplitude(PEAK_GRID_POINTS)?;
    let peak = field.envelope_peak(PEAK_GRID_POINTS)?;
    Ok((rad_to_mhz(ave), rad_to_mhz(peak)))
}

// ---------------------------------------------------------------------------
// optimize
// ---------------------------------------------------------------------------

pub struct OptimizePlan {
    family: ControlFamily,
    n_terms: usize,
    spec: ObjectiveSpec,
    constraints: ConstraintSet,
    opt: OptimizationSpec,
}

pub fn plan_optimize(cfg: &OptimizeConfig, seed: u64) -> Result<OptimizePlan, CliError> {
    let family: ControlFamily = cfg
        .family
        .parse()
        .map_err(|e: pmqoc_core::Error| config_err(e.to_string()))?;
    check(cfg.n_terms >= 1, "the number of terms must be ≥ 1")?;
    check(cfg.t_ns > 0.0, format!("duration must be > 0 ns, got {}", cfg.t_ns))?;
    check(
        cfg.omega_max_mhz > 0.0,
        format!("amplitude cap must be > 0 MHz, got {}", cfg.omega_max_mhz),
    )?;
    check(cfg.starts >= 1, "the number of starts must be ≥ 1")?;
    let t_total = ns_to_s(cfg.t_ns);
    let ensemble = build_ensemble(cfg.w_mhz, cfg.m_grid, cfg.k_draws)?;
    let spec = build_objective(
        &cfg.objective,
        &cfg.target,
        ensemble,
        t_total,
        cfg.gamma_mhz,
        cfg.dt_ns,
    )?;
    let constraints = ConstraintSet::for_horizon(mhz_to_rad(cfg.omega_max_mhz), t_total)
        .map_err(|e| config_err(e.to_string()))?;
    let n_params = family.params_per_term() * cfg.n_terms;
    let budget = cfg.budget.unwrap_or(200 * n_params);
    check(budget >= 1, "the evaluation budget must be ≥ 1")?;
    let opt = OptimizationSpec::defaults_for(n_params, seed)
        .with_starts(cfg.starts)
        .with_budget(budget)
        .with_randomized_freqs(cfg.randomize_freqs);
    Ok(OptimizePlan {
        family,
        n_terms: cfg.n_terms,
        spec,
        constraints,
        opt,
    })
}

pub fn run_optimize(plan: &OptimizePlan, run: &mut RunDir) -> Result<Value, CliError> {
    let runs = optimize_family(
        plan.family,
        plan.n_terms,
        &plan.spec,
        &plan.constraints,
        &plan.opt,
    )?;
    let best = runs.best();
    let field = field_of_record(best, plan.family, plan.n_terms, plan.spec.t_total)?;
    let fidelity = average_fidelity(&field, &plan.spec)?;
    let (omega_ave_mhz, omega_peak_mhz) = amplitude_stats(&field)?;

    run.write(
        "best_field.json",
        (FieldDocument::from_field(&field).to_json() + "\n").as_bytes(),
    )?;
    run.write("runs.csv", runs.ranked_csv().as_bytes())?;
    run.write("trace.csv", runs.best_trace_csv().as_bytes())?;

    println!(
        "best F_obj = {fidelity:.6} (objective value = {:.6e})",
        best.best_value
    );
    println!(
        "Omega_ave/2pi = {omega_ave_mhz:.4} MHz (envelope average |c|; peak {omega_peak_mhz:.4} MHz)"
    );
    println!(
        "mean n_f = {:.1} over {} starts (budget {} per start)",
        runs.mean_evaluations(),
        plan.opt.n_starts,
        plan.opt.budget
    );

    Ok(json!({
        "best_objective": best.best_value,
        "best_fidelity": fidelity,
        "best_start_index": best.start_index,
        "mean_n_f": runs.mean_evaluations(),
        "runs_within_1e-3": runs.n_within(1e-3),
        "omega_ave_mhz": omega_ave_mhz,
        "omega_peak_mhz": omega_peak_mhz,
        "n_params": plan.family.params_per_term() * plan.n_terms,
        "budget": plan.opt.budget,
        "starts": plan.opt.n_starts,
    }))
}

// ---------------------------------------------------------------------------
// eval
// ---------------------------------------------------------------------------

pub struct EvalPlan {
    field: ControlField,
    field_path: String,
    spec: ObjectiveSpec,
    cfg: EvalConfig,
}

pub fn plan_eval(cfg: &EvalConfig, _seed: u64) -> Result<EvalPlan, CliError> {
    let field = load_field(&cfg.field, "field")?;
    let ensemble = build_ensemble(cfg.w_mhz, cfg.m_grid, cfg.k_draws)?;
    let spec = build_objective(
        &cfg.objective,
        &cfg.target,
        ensemble,
        field.duration(),
        cfg.gamma_mhz,
        cfg.dt_ns,
    )?;
    Ok(EvalPlan {
        field,
        field_path: cfg.field.as_ref().unwrap().display().to_string(),
        spec,
        cfg: cfg.clone(),
    })
}

pub fn run_eval(plan: &EvalPlan, seed: u64, run: &mut RunDir) -> Result<Value, CliError> {
    let f_obj = average_fidelity(&plan.field, &plan.spec)?;
    let (mc_mean, mc_stderr) = monte_carlo_fidelity(&plan.field, &plan.spec, seed)?;
    let (omega_ave_mhz, omega_peak_mhz) = amplitude_stats(&plan.field)?;
    let stats = json!({
        "field": plan.field_path,
        "family": plan.field.family().tag(),
        "n_terms": plan.field.n_terms(),
        "t_ns": s_to_ns(plan.field.duration()),
        "objective": plan.cfg.objective,
        "target": plan.cfg.target,
        "w_mhz": plan.cfg.w_mhz,
        "m_grid": plan.cfg.m_grid,
        "k_draws": plan.cfg.k_draws,
        "gamma_mhz": plan.cfg.gamma_mhz,
        "f_obj": f_obj,
        "mc_mean": mc_mean,
        "mc_stderr": mc_stderr,
        "omega_ave_mhz": omega_ave_mhz,
        "omega_peak_mhz": omega_peak_mhz,
    });
    run.write(
        "eval.json",
        (serde_json::to_string_pretty(&stats).expect("stats serialize") + "\n").as_bytes(),
    )?;
    println!(
        "F_obj = {f_obj:.6}; Monte-Carlo fidelity = {mc_mean:.6} ± {mc_stderr:.6} (K = {})",
        plan.cfg.k_draws
    );
    println!(
        "Omega_ave/2pi = {omega_ave_mhz:.4} MHz (envelope average |c|; peak {omega_peak_mhz:.4} MHz)"
    );
    Ok(stats)
}

// ---------------------------------------------------------------------------
// map
// ---------------------------------------------------------------------------

pub struct MapPlan {
    field: ControlField,
    field2: Option<ControlField>,
    deltas: Vec<f64>,
    alphas: Vec<f64>,
    cfg: MapConfig,
}

pub fn plan_map(cfg: &MapConfig, _seed: u64) -> Result<MapPlan, CliError> {
    let field = load_field(&cfg.field, "field")?;
    let field2 = match &cfg.field2 {
        Some(_) => Some(load_field(&cfg.field2, "field2")?),
        None => None,
    };
    check(
        cfg.threshold > 0.0 && cfg.threshold < 1.0,
        format!("threshold must lie strictly between 0 and 1, got {}", cfg.threshold),
    )?;
    check(
        cfg.gamma_mhz >= 0.0,
        format!("dephasing rate must be ≥ 0 MHz, got {}", cfg.gamma_mhz),
    )?;
    check(
        cfg.delta_span_mhz > 0.0,
        format!("detuning half-span must be > 0 MHz, got {}", cfg.delta_span_mhz),
    )?;
    check(cfg.delta_points >= 1 && cfg.alpha_points >= 1, "grids need ≥ 1 point per axis")?;
    check(
        cfg.alpha_min <= cfg.alpha_max,
        format!("alpha bounds are inverted: [{}, {}]", cfg.alpha_min, cfg.alpha_max),
    )?;
    if let Some(dt) = cfg.dt_ns {
        check(dt > 0.0, format!("dt must be > 0 ns, got {dt}"))?;
    }
    let span = mhz_to_rad(cfg.delta_span_mhz);
    Ok(MapPlan {
        field,
        field2,
        deltas: linspace(-span, span, cfg.delta_points),
        alphas: linspace(cfg.alpha_min, cfg.alpha_max, cfg.alpha_points),
        cfg: cfg.clone(),
    })
}

fn one_map(
    plan: &MapPlan,
    field: &ControlField,
    name: &str,
    run: &mut RunDir,
) -> Result<f64, CliError> {
    let t_total = field.duration();
    let dt = plan.cfg.dt_ns.map(ns_to_s).unwrap_or(t_total / 2000.0);
    let gamma = mhz_to_rate(plan.cfg.gamma_mhz);
    let map = fidelity_map(field, &plan.deltas, &plan.alphas, gamma, t_total, dt)?;
    run.write(name, map.to_csv().as_bytes())?;
    Ok(map.area_above(plan.cfg.threshold)?)
}

pub fn run_map(plan: &MapPlan, run: &mut RunDir) -> Result<Value, CliError> {
    let area = one_map(plan, &plan.field, "map.csv", run)?;
    let area_mhz = rad_to_mhz(area);
    let mut stats = json!({
        "threshold": plan.cfg.threshold,
        "gamma_mhz": plan.cfg.gamma_mhz,
        "grid": {
            "delta_span_mhz": plan.cfg.delta_span_mhz,
            "delta_points": plan.cfg.delta_points,
            "alpha_min": plan.cfg.alpha_min,
            "alpha_max": plan.cfg.alpha_max,
            "alpha_points": plan.cfg.alpha_points,
        },
        "area_mhz_alpha": area_mhz,
    });
    match &plan.field2 {
        None => {
            println!(
                "area(F > {:.3}) = {area_mhz:.4} MHz·alpha",
                plan.cfg.threshold
            );
        }
        Some(field2) => {
            let area2 = one_map(plan, field2, "map2.csv", run)?;
            let area2_mhz = rad_to_mhz(area2);
            let ratio = if area2 > 0.0 { area / area2 } else { f64::INFINITY };
            stats["area2_mhz_alpha"] = json!(area2_mhz);
            stats["area_ratio"] = json!(ratio);
            println!(
                "area(F > {th:.3}): field = {area_mhz:.4}, field2 = {area2_mhz:.4} MHz·alpha",
                th = plan.cfg.threshold
            );
            println!("area ratio (field : field2) = {ratio:.4}");
        }
    }
    run.write(
        "map.json",
        (serde_json::to_string_pretty(&stats).expect("stats serialize") + "\n").as_bytes(),
    )?;
    Ok(stats)
}

// ---------------------------------------------------------------------------
// sweep
// ---------------------------------------------------------------------------

pub struct SweepPlan {
    field: ControlField,
    gammas: Vec<f64>,
    ensemble: EnsembleModel,
    dt: f64,
    cfg: SweepConfig,
}

pub fn plan_sweep(cfg: &SweepConfig, _seed: u64) -> Result<SweepPlan, CliError> {
    let field = load_field(&cfg.field, "field")?;
    check(
        cfg.gamma_min_mhz >= 0.0,
        format!("dephasing rates must be ≥ 0 MHz, got {}", cfg.gamma_min_mhz),
    )?;
    check(
        cfg.gamma_max_mhz >= cfg.gamma_min_mhz,
        format!(
            "dephasing range is inverted: [{}, {}]",
            cfg.gamma_min_mhz, cfg.gamma_max_mhz
        ),
    )?;
    check(cfg.gamma_points >= 1, "the sweep needs ≥ 1 dephasing rate")?;
    let ensemble = build_ensemble(cfg.w_mhz, cfg.m_grid, cfg.k_draws)?;
    let dt = match cfg.dt_ns {
        Some(dt) => {
            check(dt > 0.0, format!("dt must be > 0 ns, got {dt}"))?;
            ns_to_s(dt)
        }
        None => field.duration() / 2000.0,
    };
    Ok(SweepPlan {
        field,
        gammas: linspace(
            mhz_to_rate(cfg.gamma_min_mhz),
            mhz_to_rate(cfg.gamma_max_mhz),
            cfg.gamma_points,
        ),
        ensemble,
        dt,
        cfg: cfg.clone(),
    })
}

pub fn run_sweep(plan: &SweepPlan, seed: u64, run: &mut RunDir) -> Result<Value, CliError> {
    let points = dephasing_sweep(
        &plan.field,
        &plan.gammas,
        plan.ensemble,
        plan.field.duration(),
        plan.dt,
        seed,
    )?;
    run.write("sweep.csv", sweep_to_csv(&points).as_bytes())?;
    let first = points.first().expect("the sweep has ≥ 1 point");
    let last = points.last().expect("the sweep has ≥ 1 point");
    println!(
        "F(gamma = {} MHz) = {:.6} ± {:.6}; F(gamma = {} MHz) = {:.6} ± {:.6}",
        plan.cfg.gamma_min_mhz,
        first.fidelity,
        first.stderr,
        plan.cfg.gamma_max_mhz,
        last.fidelity,
        last.stderr
    );
    Ok(json!({
        "points": points.len(),
        "k_draws": plan.cfg.k_draws,
        "fidelity_at_min_gamma": first.fidelity,
        "fidelity_at_max_gamma": last.fidelity,
    }))
}

// ---------------------------------------------------------------------------
// dd
// ---------------------------------------------------------------------------

pub struct DdPlan {
    pulse: PulseImpl,
    t_pulse: f64,
    taus: Vec<f64>,
    noise: NoiseModel,
    trials: usize,
    dt: f64,
}

pub fn plan_dd(cfg: &DdConfig, _seed: u64) -> Result<DdPlan, CliError> {
    let (pulse, t_pulse) = match cfg.pulse.as_str() {
        "rect" => {
            check(
                cfg.omega_mhz > 0.0,
                format!("pulse amplitude must be > 0 MHz, got {}", cfg.omega_mhz),
            )?;
            let t_pulse = ns_to_s(cfg.tpulse_ns.unwrap_or(50.0));
            (
                PulseImpl::Rectangular {
                    omega: mhz_to_rad(cfg.omega_mhz),
                },
                t_pulse,
            )
        }
        "optimized" => {
            let x = load_field(&cfg.field_x, "field-x")?;
            let y = load_field(&cfg.field_y, "field-y")?;
            let t_pulse = cfg.tpulse_ns.map(ns_to_s).unwrap_or(x.duration());
            (PulseImpl::Optimized { x, y }, t_pulse)
        }
        other => {
            return Err(config_err(format!(
                "unknown pulse implementation '{other}' (expected rect or optimized)"
            )))
        }
    };
    check(t_pulse > 0.0, "pulse duration must be > 0 ns")?;
    check(
        cfg.tau_min_us > 0.0 && cfg.tau_max_us >= cfg.tau_min_us,
        format!(
            "pulse-separation scan must satisfy 0 < min ≤ max, got [{}, {}] µs",
            cfg.tau_min_us, cfg.tau_max_us
        ),
    )?;
    check(cfg.tau_points >= 1, "the scan needs ≥ 1 pulse separation")?;
    check(cfg.trials >= 1, "the simulation needs ≥ 1 trial")?;
    check(cfg.dt_ns > 0.0, format!("dt must be > 0 ns, got {}", cfg.dt_ns))?;
    check(
        cfg.noise_tau_us > 0.0,
        format!("drift correlation time must be > 0 µs, got {}", cfg.noise_tau_us),
    )?;
    check(
        cfg.ou_std_mhz >= 0.0 && cfg.static_fwhm_mhz >= 0.0 && cfg.gamma_mhz >= 0.0,
        "noise magnitudes must be ≥ 0",
    )?;
    let noise = NoiseModel {
        gamma: mhz_to_rate(cfg.gamma_mhz),
        tau: us_to_s(cfg.noise_tau_us),
        c: 0.0,
        static_fwhm: mhz_to_rad(cfg.static_fwhm_mhz),
    }
    .with_ou_std(mhz_to_rad(cfg.ou_std_mhz));
    Ok(DdPlan {
        pulse,
        t_pulse,
        taus: linspace(us_to_s(cfg.tau_min_us), us_to_s(cfg.tau_max_us), cfg.tau_points),
        noise,
        trials: cfg.trials,
        dt: ns_to_s(cfg.dt_ns),
    })
}

pub fn run_dd(plan: &DdPlan, seed: u64, run: &mut RunDir) -> Result<Value, CliError> {
    let curve = decay_curve(
        plan.t_pulse,
        &plan.taus,
        &plan.pulse,
        &plan.noise,
        plan.trials,
        plan.dt,
        seed,
    )?;
    run.write(
        "decay.csv",
        pmqoc_core::ddsim::curve_to_csv(&curve, plan.trials).as_bytes(),
    )?;
    let pairs: Vec<(f64, f64)> = curve.iter().map(|p| (p.t_total, p.p0)).collect();
    let summary_base = |t2: Option<f64>| {
        json!({
            "T2_us": t2,
            "threshold": T2_THRESHOLD,
            "pulse_impl": plan.pulse.tag(),
            "trials": plan.trials,
            "points": plan.taus.len(),
        })
    };
    match extract_t2(&pairs) {
        Ok(t2) => {
            let stats = summary_base(Some(s_to_us(t2)));
            run.write(
                "dd.json",
                (serde_json::to_string_pretty(&stats).expect("stats serialize") + "\n")
                    .as_bytes(),
            )?;
            println!(
                "T2 = {:.3} us (readout threshold {:.4}, {} pulses: {})",
                s_to_us(t2),
                T2_THRESHOLD,
                plan.taus.len(),
                plan.pulse.tag()
            );
            Ok(stats)
        }
        Err(e) => {
            let mut stats = summary_base(None);
            stats["error"] = json!(e.to_string());
            run.write(
                "dd.json",
                (serde_json::to_string_pretty(&stats).expect("stats serialize") + "\n")
                    .as_bytes(),
            )?;
            Err(CliError::Numeric(e.to_string()))
        }
    }
}

// ---------------------------------------------------------------------------
// spectrum
// ---------------------------------------------------------------------------

pub struct SpectrumPlan {
    field: ControlField,
    band: f64,
    cfg: SpectrumCmdConfig,
}

pub fn plan_spectrum(cfg: &SpectrumCmdConfig, _seed: u64) -> Result<SpectrumPlan, CliError> {
    let field = load_field(&cfg.field, "field")?;
    check(
        cfg.band_mhz > 0.0,
        format!("retained band must be > 0 MHz, got {}", cfg.band_mhz),
    )?;
    check(
        cfg.samples >= 4096 && cfg.samples.is_power_of_two(),
        format!("samples must be a power of two ≥ 4096, got {}", cfg.samples),
    )?;
    if let Some(th) = cfg.threshold_mhz {
        check(th > 0.0, format!("component threshold must be > 0 MHz, got {th}"))?;
    }
    let band = mhz_to_rad(cfg.band_mhz);
    let nyquist = std::f64::consts::PI * cfg.samples as f64 / field.duration();
    check(
        band <= nyquist,
        format!(
            "retained band {} MHz exceeds the Nyquist limit {:.1} MHz for {} samples",
            cfg.band_mhz,
            rad_to_mhz(nyquist),
            cfg.samples
        ),
    )?;
    Ok(SpectrumPlan {
        field,
        band,
        cfg: cfg.clone(),
    })
}

fn two_sided_csv(est: &Spectrum) -> String {
    let mut out = String::from("offset_MHz,amplitude_MHz\n");
    for (offset, amp) in est.offsets.iter().zip(&est.complex_amp) {
        out.push_str(&format!("{},{}\n", rad_to_mhz(*offset), rad_to_mhz(*amp)));
    }
    out
}

fn quadrature_csv(est: &Spectrum) -> String {
    let mut out = String::from("freq_MHz,x_amplitude_MHz,y_amplitude_MHz\n");
    for ((freq, x), y) in est.freqs.iter().zip(&est.x_amp).zip(&est.y_amp) {
        out.push_str(&format!(
            "{},{},{}\n",
            rad_to_mhz(*freq),
            rad_to_mhz(*x),
            rad_to_mhz(*y)
        ));
    }
    out
}

pub fn run_spectrum(plan: &SpectrumPlan, run: &mut RunDir) -> Result<Value, CliError> {
    let est = spectrum(&plan.field, plan.band, plan.cfg.samples)?;
    run.write("spectrum.csv", two_sided_csv(&est).as_bytes())?;
    run.write("quadratures.csv", quadrature_csv(&est).as_bytes())?;
    let components = plan
        .cfg
        .threshold_mhz
        .map(|th| count_components(&est, mhz_to_rad(th)));
    let stats = json!({
        "band_mhz": plan.cfg.band_mhz,
        "samples": plan.cfg.samples,
        "bin_width_mhz": rad_to_mhz(est.bin_width),
        "bins": est.offsets.len(),
        "threshold_mhz": plan.cfg.threshold_mhz,
        "components": components,
    });
    run.write(
        "spectrum.json",
        (serde_json::to_string_pretty(&stats).expect("stats serialize") + "\n").as_bytes(),
    )?;
    match (components, plan.cfg.threshold_mhz) {
        (Some(n), Some(th)) => {
            println!("{n} spectral components with amplitude >= {th} MHz");
        }
        _ => {
            println!(
                "{} bins over ±{} MHz (bin width {:.4} MHz)",
                est.offsets.len(),
                plan.cfg.band_mhz,
                rad_to_mhz(est.bin_width)
            );
        }
    }
    Ok(stats)
}
