//! Resolved per-command configurations. Each command reads an optional
//! JSON config file (`--config`) whose keys are exactly these snake_case
//! field names, then applies command-line flags on top (flags win). The
//! resolved struct is echoed verbatim into the run manifest.
//!
//! Unit conventions at this boundary: frequencies and amplitudes are
//! ordinary frequencies in MHz, dephasing rates are ordinary rates in MHz
//! (1/s scaled by 10⁻⁶, no 2π), durations are in ns or µs as the field
//! name says. Everything is converted to angular rad/s exactly once on the
//! way into the library.

use std::fs;
use std::path::{Path, PathBuf};

use serde::{de::DeserializeOwned, Deserialize, Serialize};

use crate::error::CliError;

/// Reads a JSON config file into a command config, or the defaults when no
/// file is given. Unknown keys and type mismatches are reported with the
/// file position that serde_json provides.
pub fn load_config<T: DeserializeOwned + Default>(path: Option<&Path>) -> Result<T, CliError> {
    let Some(path) = path else {
        return Ok(T::default());
    };
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OptimizeConfig {
    /// Drive-field family: sfb, sfb_p, sfb_p2 or pm.
    pub family: String,
    /// Number of basis terms.
    pub n_terms: usize,
    /// Pulse duration (ns).
    pub t_ns: f64,
    /// Ensemble detuning FWHM (MHz).
    pub w_mhz: f64,
    /// Peak-amplitude cap (MHz).
    pub omega_max_mhz: f64,
    /// Detuning-grid size of the averaged objective.
    pub m_grid: usize,
    /// Monte-Carlo draw count used by downstream evaluation.
    pub k_draws: usize,
    /// Pure-dephasing rate during optimization (MHz, ordinary rate).
    pub gamma_mhz: f64,
    /// "transfer" (population inversion) or "gate".
    pub objective: String,
    /// Gate target (gate objective only): pauli_x, pauli_y, pauli_z,
    /// hadamard.
    pub target: Option<String>,
    /// Number of independent starts.
    pub starts: usize,
    /// Evaluation budget per start; default 200 per free parameter.
    pub budget: Option<usize>,
    /// Draw the frequency-like coordinates randomly and keep them frozen
    /// during the descent.
    pub randomize_freqs: bool,
    /// Propagation step (ns); default T/2000.
    pub dt_ns: Option<f64>,
}

impl Default for OptimizeConfig {
    fn default() -> Self {
        OptimizeConfig {
            family: "pm".into(),
            n_terms: 1,
            t_ns: 100.0,
            w_mhz: 10.0,
            omega_max_mhz: 10.0,
            m_grid: 15,
            k_draws: 100_000,
            gamma_mhz: 0.0,
            objective: "transfer".into(),
            target: None,
            starts: 120,
            budget: None,
            randomize_freqs: false,
            dt_ns: None,
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct EvalConfig {
    /// Field document to evaluate.
    pub field: Option<PathBuf>,
    pub w_mhz: f64,
    pub m_grid: usize,
    pub k_draws: usize,
    pub gamma_mhz: f64,
    pub objective: String,
    pub target: Option<String>,
    pub dt_ns: Option<f64>,
}

impl Default for EvalConfig {
    fn default() -> Self {
        EvalConfig {
            field: None,
            w_mhz: 10.0,
            m_grid: 15,
            k_draws: 100_000,
            gamma_mhz: 0.0,
            objective: "transfer".into(),
            target: None,
            dt_ns: None,
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct MapConfig {
    /// Field document to map.
    pub field: Option<PathBuf>,
    /// Optional second field; the map command then reports the area ratio
    /// field : field2 on the shared grid.
    pub field2: Option<PathBuf>,
    /// Fidelity threshold for the area metric.
    pub threshold: f64,
    /// Pure-dephasing rate (MHz, ordinary rate).
    pub gamma_mhz: f64,
    /// Detuning half-span (MHz): the grid covers [−span, +span].
    pub delta_span_mhz: f64,
    pub delta_points: usize,
    /// Relative-amplitude grid bounds.
    pub alpha_min: f64,
    pub alpha_max: f64,
    pub alpha_points: usize,
    pub dt_ns: Option<f64>,
}

impl Default for MapConfig {
    fn default() -> Self {
        MapConfig {
            field: None,
            field2: None,
            threshold: 0.9,
            gamma_mhz: 0.0,
            delta_span_mhz: 15.0,
            delta_points: 101,
            alpha_min: 0.5,
            alpha_max: 1.5,
            alpha_points: 101,
            dt_ns: None,
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SweepConfig {
    /// Field document to sweep.
    pub field: Option<PathBuf>,
    pub w_mhz: f64,
    pub m_grid: usize,
    /// Monte-Carlo draws per dephasing rate.
    pub k_draws: usize,
    pub gamma_min_mhz: f64,
    pub gamma_max_mhz: f64,
    pub gamma_points: usize,
    pub dt_ns: Option<f64>,
}

impl Default for SweepConfig {
    fn default() -> Self {
        SweepConfig {
            field: None,
            w_mhz: 10.0,
            m_grid: 15,
            k_draws: 100_000,
            gamma_min_mhz: 0.0,
            gamma_max_mhz: 2.0,
            gamma_points: 21,
            dt_ns: None,
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DdConfig {
    /// π-pulse implementation: "rect" or "optimized".
    pub pulse: String,
    /// Rectangular-pulse amplitude (MHz); ignored for optimized pulses.
    pub omega_mhz: f64,
    /// π-pulse duration (ns); defaults to 50 for rectangular pulses and to
    /// the field duration for optimized ones.
    pub tpulse_ns: Option<f64>,
    /// X- and Y-pulse field documents (optimized pulses only).
    pub field_x: Option<PathBuf>,
    pub field_y: Option<PathBuf>,
    /// Pulse-separation scan (µs).
    pub tau_min_us: f64,
    pub tau_max_us: f64,
    pub tau_points: usize,
    /// Noise trajectories per point.
    pub trials: usize,
    /// Propagation step (ns).
    pub dt_ns: f64,
    /// Drift correlation time (µs).
    pub noise_tau_us: f64,
    /// Stationary standard deviation of the drift (MHz).
    pub ou_std_mhz: f64,
    /// FWHM of the static detuning drawn once per trial (MHz).
    pub static_fwhm_mhz: f64,
    /// Pure-dephasing rate (MHz, ordinary rate).
    pub gamma_mhz: f64,
}

impl Default for DdConfig {
    fn default() -> Self {
        DdConfig {
            pulse: "rect".into(),
            omega_mhz: 10.0,
            tpulse_ns: None,
            field_x: None,
            field_y: None,
            tau_min_us: 0.45,
            tau_max_us: 5.65,
            tau_points: 20,
            trials: 200,
            dt_ns: 2.0,
            noise_tau_us: 20.0,
            ou_std_mhz: 0.05,
            static_fwhm_mhz: 26.5,
            gamma_mhz: 0.0,
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SpectrumCmdConfig {
    /// Field document to analyze.
    pub field: Option<PathBuf>,
    /// Retained band around the carrier: offsets in [−band, +band] (MHz).
    pub band_mhz: f64,
    /// Number of envelope samples (power of two ≥ 4096).
    pub samples: usize,
    /// When set, count spectral components with amplitude ≥ this (MHz).
    pub threshold_mhz: Option<f64>,
}

impl Default for SpectrumCmdConfig {
    fn default() -> Self {
        SpectrumCmdConfig {
            field: None,
            band_mhz: 100.0,
            samples: 65_536,
            threshold_mhz: None,
        }
    }
}
