//! Spectral estimation for drive-field envelopes.
//!
//! The estimator samples the complex envelope c(t) uniformly on [0, T],
//! applies a window, zero-pads, and reports three amplitude spectra:
//!
//! * the **two-sided** spectrum of the complex envelope itself — offsets
//!   from the carrier can be negative and map one-to-one onto lab-frame
//!   components at ω₀ + offset, which makes this the spectrum used for
//!   counting frequency components and for checking sideband predictions;
//! * the **one-sided** spectra of the x and y quadratures (Re c and Im c),
//!   which is what a per-axis plot of the drive shows.
//!
//! Amplitude normalization is coherent-gain corrected: an envelope term
//! `a·e^{iωt}` produces a two-sided line of height |a| at ω, and a real tone
//! `a·cos(ωt)` produces a one-sided line of height |a| (its two-sided image
//! is a pair of |a|/2 lines at ±ω).

use num_complex::Complex64;
use rustfft::FftPlanner;

use crate::units::TAU;
use crate::{Error, Result};

use super::ControlField;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WindowKind {
    /// Periodic Hann window; the default for peak work (sidelobes −31 dB).
    Hann,
    /// No windowing; keeps the direct Parseval relation between spectrum
    /// magnitudes and the sampled envelope's mean square.
    Rect,
}

#[derive(Clone, Copy, Debug)]
pub struct SpectrumConfig {
    /// Number of envelope samples; a power of two ≥ 4096.
    pub n_samples: usize,
    /// Largest |offset| retained, rad/s. Must not exceed the sampling
    /// Nyquist limit π·n_samples/T.
    pub omega_max: f64,
    pub window: WindowKind,
    /// Zero-padding factor (×4 default) for finer bin interpolation.
    pub padding: usize,
}

impl SpectrumConfig {
    /// Default estimator for a field: 4096 samples, Hann window, ×4 padding,
    /// band reaching twice the standard frequency-constraint cap 2π·5/T.
    pub fn for_field(field: &ControlField) -> Self {
        SpectrumConfig {
            n_samples: 4096,
            omega_max: TAU * 10.0 / field.duration(),
            window: WindowKind::Hann,
            padding: 4,
        }
    }
}

/// One interpolated spectral line.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Peak {
    /// Offset from the carrier, rad/s (signed on two-sided spectra).
    pub offset: f64,
    /// Interpolated amplitude, rad/s.
    pub amplitude: f64,
}

#[derive(Clone, Debug)]
pub struct Spectrum {
    /// Two-sided offsets of the complex envelope, ascending, rad/s.
    pub offsets: Vec<f64>,
    /// Amplitude |c̃(offset)| per two-sided bin.
    pub complex_amp: Vec<f64>,
    /// One-sided quadrature offsets, ascending from 0, rad/s.
    pub freqs: Vec<f64>,
    /// One-sided amplitude of Re c per bin (fold-corrected).
    pub x_amp: Vec<f64>,
    /// One-sided amplitude of Im c per bin (fold-corrected).
    pub y_amp: Vec<f64>,
    /// Bin spacing after padding, rad/s.
    pub bin_width: f64,
    /// Σ amp² over the retained two-sided bins. Equals the mean square of
    /// the sampled envelope when the window is rectangular, the padding is
    /// 1 and the full band is retained.
    pub complex_mean_square: f64,
    /// Tone-power sum over the retained x-quadrature bins (DC and Nyquist
    /// unhalved, interior bins amp²/2); same Parseval caveats as above.
    pub x_mean_square: f64,
    pub y_mean_square: f64,
}

/// Spectrum with the default Hann/×4 estimator. `omega_max` is the retained
/// band (rad/s) and `n_samples` the number of envelope samples.
pub fn spectrum(field: &ControlField, omega_max: f64, n_samples: usize) -> Result<Spectrum> {
    spectrum_with(
        field,
        &SpectrumConfig {
            n_samples,
            omega_max,
            window: WindowKind::Hann,
            padding: 4,
        },
    )
}

pub fn spectrum_with(field: &ControlField, cfg: &SpectrumConfig) -> Result<Spectrum> {
    if cfg.n_samples < 4096 || !cfg.n_samples.is_power_of_two() {
        return Err(Error::InvalidArgument(format!(
            "n_samples must be a power of two ≥ 4096, got {}",
            cfg.n_samples
        )));
    }
    if cfg.padding == 0 {
        return Err(Error::InvalidArgument("padding factor must be ≥ 1".into()));
    }
    let t_total = field.duration();
    let nyquist = std::f64::consts::PI * cfg.n_samples as f64 / t_total;
    if !(cfg.omega_max > 0.0) || cfg.omega_max > nyquist {
        return Err(Error::InvalidArgument(format!(
            "omega_max must lie in (0, {nyquist:.3e}] rad/s, got {:.3e}",
            cfg.omega_max
        )));
    }

    let n = cfg.n_samples;
    let n_fft = n * cfg.padding;
    let dt = t_total / n as f64;

    let mut win_sum = 0.0;
    let mut windowed = Vec::with_capacity(n);
    for k in 0..n {
        let w = match cfg.window {
            WindowKind::Hann => 0.5 * (1.0 - (TAU * k as f64 / n as f64).cos()),
            WindowKind::Rect => 1.0,
        };
        win_sum += w;
        windowed.push(field.envelope(k as f64 * dt) * w);
    }

    let mut planner = FftPlanner::new();
    let fft = planner.plan_fft_forward(n_fft);
    let run = |samples: Vec<Complex64>| -> Vec<Complex64> {
        let mut buf = samples;
        buf.resize(n_fft, Complex64::new(0.0, 0.0));
        fft.process(&mut buf);
        buf
    };

    let full = run(windowed.clone());
    let x_fft = run(windowed.iter().map(|c| Complex64::new(c.re, 0.0)).collect());
    let y_fft = run(windowed.iter().map(|c| Complex64::new(c.im, 0.0)).collect());

    let bin_width = TAU / (n_fft as f64 * dt);

    // Two-sided complex spectrum, ascending in signed offset (fft shift).
    let half = n_fft / 2;
    let mut offsets = Vec::new();
    let mut complex_amp = Vec::new();
    let mut complex_mean_square = 0.0;
    for i in 0..n_fft {
        let k_signed = i as i64 - half as i64;
        let omega = k_signed as f64 * bin_width;
        if omega.abs() > cfg.omega_max {
            continue;
        }
        let k = (i + half) % n_fft; // undo the shift to index the FFT output
        let amp = full[k].norm() / win_sum;
        offsets.push(omega);
        complex_amp.push(amp);
        complex_mean_square += amp * amp;
    }

    // One-sided quadrature spectra with fold correction.
    let mut freqs = Vec::new();
    let mut x_amp = Vec::new();
    let mut y_amp = Vec::new();
    let mut x_mean_square = 0.0;
    let mut y_mean_square = 0.0;
    for k in 0..=half {
        let omega = k as f64 * bin_width;
        if omega > cfg.omega_max {
            break;
        }
        let fold = if k == 0 || k == half { 1.0 } else { 2.0 };
        let ax = fold * x_fft[k].norm() / win_sum;
        let ay = fold * y_fft[k].norm() / win_sum;
        // tone power: a²/2 for folded interior bins, a² for DC/Nyquist
        let power = if fold == 1.0 { 1.0 } else { 0.5 };
        x_mean_square += power * ax * ax;
        y_mean_square += power * ay * ay;
        freqs.push(omega);
        x_amp.push(ax);
        y_amp.push(ay);
    }

    Ok(Spectrum {
        offsets,
        complex_amp,
        freqs,
        x_amp,
        y_amp,
        bin_width,
        complex_mean_square,
        x_mean_square,
        y_mean_square,
    })
}

/// Local maxima of `amps` at least `floor` high, refined by parabolic
/// interpolation over the peak bin and its neighbors. Grid-edge maxima are
/// reported at their bin position.
pub fn find_peaks(offsets: &[f64], amps: &[f64], floor: f64) -> Vec<Peak> {
    let n = amps.len();
    let mut peaks = Vec::new();
    for k in 0..n {
        let left = if k == 0 { f64::NEG_INFINITY } else { amps[k - 1] };
        let right = if k + 1 == n { f64::NEG_INFINITY } else { amps[k + 1] };
        // strict rise on the left tolerates flat tails; ties broken leftward
        if amps[k] < floor || amps[k] <= left || amps[k] < right {
            continue;
        }
        if k == 0 || k + 1 == n {
            peaks.push(Peak {
                offset: offsets[k],
                amplitude: amps[k],
            });
            continue;
        }
        let denom = amps[k - 1] - 2.0 * amps[k] + amps[k + 1];
        let shift = if denom.abs() < 1e-300 {
            0.0
        } else {
            (0.5 * (amps[k - 1] - amps[k + 1]) / denom).clamp(-0.5, 0.5)
        };
        let step = offsets[k] - offsets[k - 1];
        peaks.push(Peak {
            offset: offsets[k] + shift * step,
            amplitude: amps[k] - 0.25 * (amps[k - 1] - amps[k + 1]) * shift,
        });
    }
    peaks
}

/// Number of distinct drive-frequency components at or above `threshold`
/// (rad/s amplitude), counted on the two-sided complex-envelope spectrum —
/// i.e. the number of lab-frame comb lines at ω₀ + offset that carry at
/// least that amplitude.
pub fn count_components(spec: &Spectrum, threshold: f64) -> usize {
    find_peaks(&spec.offsets, &spec.complex_amp, threshold).len()
}
