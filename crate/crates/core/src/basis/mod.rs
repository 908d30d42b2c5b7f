//! Parametrized drive-field families and their spectral structure.
//!
//! A drive is described in the frame rotating at the carrier ω₀ by a complex
//! envelope c(t); the control Hamiltonian is
//! `H_c(t) = (Re c/2) σx + (Im c/2) σy` (rad/s). Four families are supported,
//! each a sum of N terms with a fixed per-term parameter block:
//!
//! * `Sfb`    — `Σ aⱼ cos(ωⱼt + φⱼ)` (real envelope), block (aⱼ, ωⱼ, φⱼ);
//! * `SfbP`   — `Σ aⱼ e^{i(ωⱼt + φⱼ)}`, block (aⱼ, ωⱼ, φⱼ);
//! * `SfbP2`  — `Σ aⱼ cos(ωⱼt + φⱼ) e^{iφ′ⱼ}`, block (aⱼ, ωⱼ, φⱼ, φ′ⱼ);
//! * `Pm`     — `Σ aⱼ e^{i(bⱼ/νⱼ) sin(νⱼt)}` (phase-modulated carrier),
//!   block (aⱼ, bⱼ, νⱼ).
//!
//! Amplitudes and frequency-like parameters are angular (rad/s), phases are
//! radians, durations are seconds. The phase-modulated family expands into
//! sidebands at offsets l·ν with weights a·J_l(b/ν) (Jacobi–Anger), which is
//! what [`pm_sidebands`] predicts and the [`spectrum`] estimator measures.

mod bessel;
mod spectrum;

pub use bessel::{bessel_j, bessel_j_array};
pub use spectrum::{
    count_components, find_peaks, spectrum, spectrum_with, Peak, Spectrum, SpectrumConfig,
    WindowKind,
};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::units::{mhz_to_rad, ns_to_s, rad_to_mhz, s_to_ns, TAU};
use crate::{Error, Result};

/// When |ν|·T falls below this, the modulation phase (b/ν)·sin(νt) is
/// replaced by its ν→0 limit b·t to avoid the 0/0 evaluation.
pub const PM_SLOW_MODULATION_EPS: f64 = 1e-6;

/// The kind of each entry in a per-term parameter block; decides how the
/// serialization boundary converts it (frequencies in MHz, phases verbatim).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ParamKind {
    /// Rabi-amplitude weight aⱼ (rad/s).
    Amplitude,
    /// Frequency-like parameter ωⱼ, bⱼ or νⱼ (rad/s).
    Frequency,
    /// Phase offset (radians).
    Phase,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ControlFamily {
    Sfb,
    SfbP,
    SfbP2,
    Pm,
}

impl ControlFamily {
    pub const ALL: [ControlFamily; 4] = [
        ControlFamily::Sfb,
        ControlFamily::SfbP,
        ControlFamily::SfbP2,
        ControlFamily::Pm,
    ];

    /// Layout of one per-term parameter block.
    pub fn block(&self) -> &'static [ParamKind] {
        use ParamKind::*;
        match self {
            ControlFamily::Sfb | ControlFamily::SfbP => &[Amplitude, Frequency, Phase],
            ControlFamily::SfbP2 => &[Amplitude, Frequency, Phase, Phase],
            ControlFamily::Pm => &[Amplitude, Frequency, Frequency],
        }
    }

    pub fn params_per_term(&self) -> usize {
        self.block().len()
    }

    /// Offset inside each block of the frequency that the randomized-search
    /// variant draws once and then freezes: ωⱼ for the comb families, νⱼ for
    /// the phase-modulated one.
    pub fn randomized_freq_offset(&self) -> usize {
        match self {
            ControlFamily::Sfb | ControlFamily::SfbP | ControlFamily::SfbP2 => 1,
            ControlFamily::Pm => 2,
        }
    }

    /// Mask over the flat parameter vector marking the coordinates that the
    /// randomized-search variant freezes at their drawn values.
    pub fn frozen_freq_mask(&self, n_terms: usize) -> Vec<bool> {
        let ppt = self.params_per_term();
        let off = self.randomized_freq_offset();
        (0..n_terms * ppt).map(|i| i % ppt == off).collect()
    }

    pub fn tag(&self) -> &'static str {
        match self {
            ControlFamily::Sfb => "sfb",
            ControlFamily::SfbP => "sfb_p",
            ControlFamily::SfbP2 => "sfb_p2",
            ControlFamily::Pm => "pm",
        }
    }
}

impl std::fmt::Display for ControlFamily {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.tag())
    }
}

impl std::str::FromStr for ControlFamily {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "sfb" => Ok(ControlFamily::Sfb),
            "sfb_p" => Ok(ControlFamily::SfbP),
            "sfb_p2" => Ok(ControlFamily::SfbP2),
            "pm" => Ok(ControlFamily::Pm),
            other => Err(Error::InvalidArgument(format!(
                "unknown control family '{other}' (expected sfb, sfb_p, sfb_p2 or pm)"
            ))),
        }
    }
}

/// A concrete drive field: family, term count, flat parameter vector
/// (per-term blocks), pulse duration and carrier frequency.
#[derive(Clone, Debug, PartialEq)]
pub struct ControlField {
    family: ControlFamily,
    n_terms: usize,
    params: Vec<f64>,
    t: f64,
    omega0: f64,
}

impl ControlField {
    /// `params` is the concatenation of `n_terms` blocks laid out per
    /// [`ControlFamily::block`]; `t` is the pulse duration in seconds and
    /// `omega0` the carrier angular frequency (rad/s, only used when
    /// synthesizing the lab-frame waveform).
    pub fn new(
        family: ControlFamily,
        n_terms: usize,
        params: Vec<f64>,
        t: f64,
        omega0: f64,
    ) -> Result<Self> {
        if n_terms == 0 {
            return Err(Error::InvalidArgument("n_terms must be ≥ 1".into()));
        }
        let expected = n_terms * family.params_per_term();
        if params.len() != expected {
            return Err(Error::ParamLength {
                expected,
                got: params.len(),
            });
        }
        if !(t.is_finite() && t > 0.0) {
            return Err(Error::InvalidArgument(format!(
                "duration must be positive and finite, got {t}"
            )));
        }
        if !omega0.is_finite() {
            return Err(Error::InvalidArgument("carrier must be finite".into()));
        }
        if let Some(bad) = params.iter().find(|p| !p.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "non-finite parameter {bad}"
            )));
        }
        Ok(ControlField {
            family,
            n_terms,
            params,
            t,
            omega0,
        })
    }

    pub fn family(&self) -> ControlFamily {
        self.family
    }

    pub fn n_terms(&self) -> usize {
        self.n_terms
    }

    pub fn n_params(&self) -> usize {
        self.params.len()
    }

    pub fn params(&self) -> &[f64] {
        &self.params
    }

    /// Pulse duration in seconds.
    pub fn duration(&self) -> f64 {
        self.t
    }

    pub fn omega0(&self) -> f64 {
        self.omega0
    }

    /// Same field shape with a different parameter vector (the optimizer's
    /// inner loop).
    pub fn with_params(&self, params: Vec<f64>) -> Result<Self> {
        ControlField::new(self.family, self.n_terms, params, self.t, self.omega0)
    }

    /// Modulation phase of PM term `j` at time `t`, with the ν→0 guard.
    fn pm_phase(&self, j: usize, time: f64) -> f64 {
        let b = self.params[3 * j + 1];
        let nu = self.params[3 * j + 2];
        if nu.abs() * self.t < PM_SLOW_MODULATION_EPS {
            b * time
        } else {
            b / nu * (nu * time).sin()
        }
    }

    /// Complex envelope c(t) in the carrier-rotating frame (rad/s).
    pub fn envelope(&self, time: f64) -> Complex64 {
        let p = &self.params;
        match self.family {
            ControlFamily::Sfb => {
                let mut re = 0.0;
                for j in 0..self.n_terms {
                    let (a, w, phi) = (p[3 * j], p[3 * j + 1], p[3 * j + 2]);
                    re += a * (w * time + phi).cos();
                }
                Complex64::new(re, 0.0)
            }
            ControlFamily::SfbP => {
                let mut acc = Complex64::new(0.0, 0.0);
                for j in 0..self.n_terms {
                    let (a, w, phi) = (p[3 * j], p[3 * j + 1], p[3 * j + 2]);
                    acc += a * Complex64::from_polar(1.0, w * time + phi);
                }
                acc
            }
            ControlFamily::SfbP2 => {
                let mut acc = Complex64::new(0.0, 0.0);
                for j in 0..self.n_terms {
                    let (a, w, phi, phi2) =
                        (p[4 * j], p[4 * j + 1], p[4 * j + 2], p[4 * j + 3]);
                    acc += a * (w * time + phi).cos() * Complex64::from_polar(1.0, phi2);
                }
                acc
            }
            ControlFamily::Pm => {
                let mut acc = Complex64::new(0.0, 0.0);
                for j in 0..self.n_terms {
                    let a = p[3 * j];
                    acc += a * Complex64::from_polar(1.0, self.pm_phase(j, time));
                }
                acc
            }
        }
    }

    /// Real lab-frame waveform g(t), carrier included. The rotating-wave
    /// reduction of `g(t)·σx` against the carrier reproduces the envelope
    /// Hamiltonian of [`ControlField::envelope`].
    pub fn lab_field(&self, time: f64) -> f64 {
        let p = &self.params;
        let w0 = self.omega0;
        match self.family {
            ControlFamily::Sfb => {
                let mut g = 0.0;
                for j in 0..self.n_terms {
                    let (a, w, phi) = (p[3 * j], p[3 * j + 1], p[3 * j + 2]);
                    g += a * (w * time + phi).cos() * (w0 * time).cos();
                }
                g
            }
            ControlFamily::SfbP => {
                let mut g = 0.0;
                for j in 0..self.n_terms {
                    let (a, w, phi) = (p[3 * j], p[3 * j + 1], p[3 * j + 2]);
                    g += a * ((w0 + w) * time + phi).cos();
                }
                g
            }
            ControlFamily::SfbP2 => {
                let mut g = 0.0;
                for j in 0..self.n_terms {
                    let (a, w, phi, phi2) =
                        (p[4 * j], p[4 * j + 1], p[4 * j + 2], p[4 * j + 3]);
                    g += a * (w * time + phi).cos() * (w0 * time + phi2).cos();
                }
                g
            }
            ControlFamily::Pm => {
                let mut g = 0.0;
                for j in 0..self.n_terms {
                    let a = p[3 * j];
                    g += a * (w0 * time + self.pm_phase(j, time)).cos();
                }
                g
            }
        }
    }

    /// max |c(t)| over a uniform grid of `n_grid` intervals on [0, T].
    /// Used to enforce the amplitude constraint; `n_grid` must be ≥ 1000 so
    /// the scan cannot miss narrow excursions of the envelope.
    pub fn envelope_peak(&self, n_grid: usize) -> Result<f64> {
        if n_grid < 1000 {
            return Err(Error::InvalidArgument(format!(
                "envelope peak scan needs n_grid ≥ 1000, got {n_grid}"
            )));
        }
        let mut peak = 0.0f64;
        for i in 0..=n_grid {
            let time = self.t * i as f64 / n_grid as f64;
            peak = peak.max(self.envelope(time).norm());
        }
        Ok(peak)
    }

    /// (1/T)∫₀ᵀ |c(t)| dt by the trapezoidal rule on `n_grid` intervals —
    /// the average Rabi amplitude the pulse spends.
    pub fn average_amplitude(&self, n_grid: usize) -> Result<f64> {
        if n_grid < 1000 {
            return Err(Error::InvalidArgument(format!(
                "average amplitude needs n_grid ≥ 1000, got {n_grid}"
            )));
        }
        let mut acc = 0.0;
        for i in 0..=n_grid {
            let time = self.t * i as f64 / n_grid as f64;
            let w = if i == 0 || i == n_grid { 0.5 } else { 1.0 };
            acc += w * self.envelope(time).norm();
        }
        Ok(acc / n_grid as f64)
    }

    /// Upper bound Σ|aⱼ| on the envelope magnitude.
    pub fn amplitude_sum(&self) -> f64 {
        let ppt = self.family.params_per_term();
        (0..self.n_terms)
            .map(|j| self.params[ppt * j].abs())
            .sum()
    }
}

/// One predicted sideband of a phase-modulated term.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Sideband {
    /// Offset from the carrier, rad/s (can be negative).
    pub offset: f64,
    /// Signed weight a·J_l(b/ν), rad/s.
    pub amplitude: f64,
}

/// Jacobi–Anger expansion of one phase-modulated term: the drive
/// `a·e^{i(b/ν) sin(νt)}` equals the comb `Σ_l a·J_l(b/ν)·e^{ilνt}`, so the
/// sidebands sit at offsets l·ν with weights a·J_l(b/ν), l = −l_max…l_max.
pub fn pm_sidebands(a: f64, b: f64, nu: f64, l_max: u32) -> Result<Vec<Sideband>> {
    if !(nu.is_finite() && nu > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "sideband expansion needs ν > 0, got {nu}"
        )));
    }
    let x = b / nu;
    let j = bessel_j_array(l_max, x);
    let mut out = Vec::with_capacity(2 * l_max as usize + 1);
    for l in -(l_max as i64)..=l_max as i64 {
        let order = l.unsigned_abs() as usize;
        let sign = if l < 0 && order % 2 == 1 { -1.0 } else { 1.0 };
        out.push(Sideband {
            offset: l as f64 * nu,
            amplitude: a * sign * j[order],
        });
    }
    Ok(out)
}

/// Box constraints for field parameters: amplitude cap (rad/s), the window
/// for every frequency-like parameter, and the phase window.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConstraintSet {
    /// Peak envelope amplitude cap Ω_max, rad/s.
    pub omega_max: f64,
    /// Frequency-like parameters live in [freq_min, freq_max], rad/s.
    pub freq_min: f64,
    pub freq_max: f64,
    /// Phases live in [phase_min, phase_max], radians.
    pub phase_min: f64,
    pub phase_max: f64,
}

impl ConstraintSet {
    /// Standard constraint box for a pulse of duration `t`: amplitudes in
    /// [−Ω_max, Ω_max], frequencies in 2π·[0, 5/T], phases in [0, 2π].
    pub fn for_horizon(omega_max: f64, t: f64) -> Result<Self> {
        if !(omega_max.is_finite() && omega_max > 0.0) {
            return Err(Error::InvalidArgument(format!(
                "Ω_max must be positive, got {omega_max}"
            )));
        }
        if !(t.is_finite() && t > 0.0) {
            return Err(Error::InvalidArgument(format!(
                "horizon must be positive, got {t}"
            )));
        }
        Ok(ConstraintSet {
            omega_max,
            freq_min: 0.0,
            freq_max: TAU * 5.0 / t,
            phase_min: 0.0,
            phase_max: TAU,
        })
    }

    /// Per-coordinate (lo, hi) box for a field of `n_terms` terms.
    pub fn bounds(&self, family: ControlFamily, n_terms: usize) -> Vec<(f64, f64)> {
        let mut out = Vec::with_capacity(n_terms * family.params_per_term());
        for _ in 0..n_terms {
            for kind in family.block() {
                out.push(match kind {
                    ParamKind::Amplitude => (-self.omega_max, self.omega_max),
                    ParamKind::Frequency => (self.freq_min, self.freq_max),
                    ParamKind::Phase => (self.phase_min, self.phase_max),
                });
            }
        }
        out
    }
}

/// Serialized form of a [`ControlField`]: ordinary-frequency units (MHz) for
/// amplitudes and frequency-like parameters, radians for phases, duration in
/// nanoseconds. The JSON document round-trips bit-exactly; the MHz↔rad/s
/// conversion is tight to 1e-12 relative.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FieldDocument {
    pub family: ControlFamily,
    #[serde(rename = "N")]
    pub n: usize,
    #[serde(rename = "T_ns")]
    pub t_ns: f64,
    #[serde(rename = "omega0_MHz")]
    pub omega0_mhz: f64,
    /// Flat per-term blocks, frequency-like entries in MHz, phases in rad.
    pub params: Vec<f64>,
}

impl FieldDocument {
    pub fn from_field(field: &ControlField) -> Self {
        let block = field.family().block();
        let params = field
            .params()
            .iter()
            .enumerate()
            .map(|(i, &v)| match block[i % block.len()] {
                ParamKind::Phase => v,
                _ => rad_to_mhz(v),
            })
            .collect();
        FieldDocument {
            family: field.family(),
            n: field.n_terms(),
            t_ns: s_to_ns(field.duration()),
            omega0_mhz: rad_to_mhz(field.omega0()),
            params,
        }
    }

    pub fn to_field(&self) -> Result<ControlField> {
        let block = self.family.block();
        let params = self
            .params
            .iter()
            .enumerate()
            .map(|(i, &v)| match block[i % block.len()] {
                ParamKind::Phase => v,
                _ => mhz_to_rad(v),
            })
            .collect();
        ControlField::new(
            self.family,
            self.n,
            params,
            ns_to_s(self.t_ns),
            mhz_to_rad(self.omega0_mhz),
        )
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("field document serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text)
            .map_err(|e| Error::InvalidArgument(format!("malformed field document: {e}")))
    }
}
