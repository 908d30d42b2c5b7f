//! Post-optimization robustness evaluation.
//!
//! Once a drive field has been optimized, three questions remain: how does
//! it perform away from the nominal operating point (a fidelity map over
//! detuning × amplitude scale), how much of parameter space it covers above
//! a quality threshold (an area metric suitable for comparing two fields on
//! the same grid), and how quickly dephasing erodes the ensemble average (a
//! γ sweep). All three live here.

use rayon::prelude::*;
use serde::Serialize;

use crate::basis::ControlField;
use crate::dynamics::{
    propagate_lindblad_cached, propagate_state_cached, steps_for, EnsembleModel, EnvelopeTable,
};
use crate::objective::{initial_state, monte_carlo_fidelity, ObjectiveSpec};
use crate::twolevel::{mixed_fidelity, state_fidelity, DensityMatrix, PureState};
use crate::units::rad_to_mhz;
use crate::{Error, Result};

/// Points per axis of the default map grids.
pub const DEFAULT_MAP_POINTS: usize = 101;
/// Half-width of the default detuning axis, in units of the ensemble FWHM.
pub const DEFAULT_DELTA_SPAN_FWHMS: f64 = 1.5;
/// Bounds of the default amplitude-scale axis.
pub const DEFAULT_ALPHA_RANGE: (f64, f64) = (0.5, 1.5);

/// `count` evenly spaced values covering `[lo, hi]` inclusive.
pub fn linspace(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    if count <= 1 {
        return vec![lo];
    }
    let step = (hi - lo) / (count - 1) as f64;
    (0..count).map(|i| lo + i as f64 * step).collect()
}

/// Default detuning axis: `[-1.5 W, 1.5 W]` for ensemble FWHM `W`.
pub fn default_delta_grid(fwhm: f64) -> Vec<f64> {
    let span = DEFAULT_DELTA_SPAN_FWHMS * fwhm;
    linspace(-span, span, DEFAULT_MAP_POINTS)
}

/// Default amplitude-scale axis: `[0.5, 1.5]`.
pub fn default_alpha_grid() -> Vec<f64> {
    linspace(DEFAULT_ALPHA_RANGE.0, DEFAULT_ALPHA_RANGE.1, DEFAULT_MAP_POINTS)
}

/// Fidelity of the |↓⟩ → |↑⟩ transfer on a detuning × amplitude-scale grid.
///
/// `values[i][j]` is the fidelity at amplitude scale `alphas[i]` and
/// detuning `deltas[j]`. Axes are stored in internal units (rad/s for the
/// detuning, dimensionless for the scale) together with the dephasing rate
/// the map was computed at.
#[derive(Clone, Debug, Serialize)]
pub struct FidelityMap {
    pub deltas: Vec<f64>,
    pub alphas: Vec<f64>,
    pub values: Vec<Vec<f64>>,
    pub gamma: f64,
}

impl FidelityMap {
    /// Area of the region where fidelity exceeds `threshold`, in axis units
    /// (rad/s × dimensionless). Pure cell counting: each grid node owns the
    /// cell that extends halfway to its neighbors (half cells at the axis
    /// edges), so an all-above map integrates to exactly the axis-span
    /// rectangle and no sub-cell interpolation is performed. Comparisons
    /// between two maps are meaningful only on identical grids.
    pub fn area_above(&self, threshold: f64) -> Result<f64> {
        if !(threshold > 0.0 && threshold < 1.0) {
            return Err(Error::InvalidArgument(format!(
                "threshold must lie strictly between 0 and 1, got {threshold}"
            )));
        }
        let dw = cell_widths(&self.deltas);
        let aw = cell_widths(&self.alphas);
        let mut area = 0.0;
        for (row, wa) in self.values.iter().zip(&aw) {
            for (&f, wd) in row.iter().zip(&dw) {
                if f > threshold {
                    area += wa * wd;
                }
            }
        }
        Ok(area)
    }

    /// Long-format CSV with the detuning converted to ordinary MHz.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("delta_MHz,alpha,fidelity\n");
        for (ia, alpha) in self.alphas.iter().enumerate() {
            for (jd, delta) in self.deltas.iter().enumerate() {
                out.push_str(&format!(
                    "{:.9},{:.9},{:.12}\n",
                    rad_to_mhz(*delta),
                    alpha,
                    self.values[ia][jd]
                ));
            }
        }
        out
    }
}

/// Width of the cell owned by each node of a sorted axis: half the gap to
/// each neighbor, so the widths telescope to the full span. A single-node
/// axis has zero extent.
fn cell_widths(axis: &[f64]) -> Vec<f64> {
    let n = axis.len();
    if n <= 1 {
        return vec![0.0; n];
    }
    (0..n)
        .map(|i| {
            let lo = if i == 0 { axis[0] } else { (axis[i - 1] + axis[i]) / 2.0 };
            let hi = if i == n - 1 {
                axis[n - 1]
            } else {
                (axis[i] + axis[i + 1]) / 2.0
            };
            hi - lo
        })
        .collect()
}

/// Single-system |↓⟩ → |↑⟩ fidelity at every (δ, α) grid node. Closed
/// (unitary) propagation when `gamma == 0`, Lindblad pure dephasing
/// otherwise. Every cell shares one sampled envelope table; rows are filled
/// in parallel with a deterministic layout.
pub fn fidelity_map(
    field: &ControlField,
    deltas: &[f64],
    alphas: &[f64],
    gamma: f64,
    t_total: f64,
    dt: f64,
) -> Result<FidelityMap> {
    if deltas.is_empty() || alphas.is_empty() {
        return Err(Error::InvalidArgument(
            "fidelity map needs non-empty δ and α grids".into(),
        ));
    }
    if !(gamma.is_finite() && gamma >= 0.0) {
        return Err(Error::InvalidArgument(format!(
            "dephasing rate must be ≥ 0, got {gamma}"
        )));
    }
    for (name, axis) in [("δ", deltas), ("α", alphas)] {
        if axis.iter().any(|x| !x.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "{name} grid contains a non-finite value"
            )));
        }
    }
    let n = steps_for(t_total, dt)?;
    let table = EnvelopeTable::build(field, t_total, n);
    let start = initial_state();
    let target = PureState::up();
    let rho0 = DensityMatrix::from_pure(&start);
    let values: Vec<Vec<f64>> = alphas
        .par_iter()
        .map(|&alpha| {
            deltas
                .iter()
                .map(|&delta| {
                    if gamma == 0.0 {
                        let psi = propagate_state_cached(&table, &start, delta, alpha);
                        state_fidelity(&psi, &target)
                    } else {
                        let rho = propagate_lindblad_cached(&table, &rho0, delta, alpha, gamma);
                        mixed_fidelity(&rho, &target)
                    }
                })
                .collect()
        })
        .collect();
    Ok(FidelityMap {
        deltas: deltas.to_vec(),
        alphas: alphas.to_vec(),
        values,
        gamma,
    })
}

/// One point of a dephasing sweep: the rate, the Monte-Carlo ensemble
/// fidelity of the |↓⟩ → |↑⟩ transfer at that rate, and its standard error.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct SweepPoint {
    pub gamma: f64,
    pub fidelity: f64,
    pub stderr: f64,
}

/// Monte-Carlo ensemble fidelity as a function of the dephasing rate. All
/// rates reuse the same detuning draws (same `seed`), so the γ = 0 entry is
/// bit-identical to the closed-system Monte-Carlo estimate and differences
/// between rates carry no sampling noise.
pub fn dephasing_sweep(
    field: &ControlField,
    gammas: &[f64],
    ensemble: EnsembleModel,
    t_total: f64,
    dt: f64,
    seed: u64,
) -> Result<Vec<SweepPoint>> {
    let base = ObjectiveSpec::state_transfer(PureState::up(), ensemble, t_total).with_dt(dt);
    gammas
        .iter()
        .map(|&gamma| {
            let spec = base.clone().with_gamma(gamma);
            let (fidelity, stderr) = monte_carlo_fidelity(field, &spec, seed)?;
            Ok(SweepPoint {
                gamma,
                fidelity,
                stderr,
            })
        })
        .collect()
}

/// CSV for a dephasing sweep, rates in ordinary MHz (rate/1e6, no 2π).
pub fn sweep_to_csv(points: &[SweepPoint]) -> String {
    let mut out = String::from("gamma_MHz,fidelity,stderr\n");
    for p in points {
        out.push_str(&format!(
            "{:.9},{:.12},{:.3e}\n",
            crate::units::rate_to_mhz(p.gamma),
            p.fidelity,
            p.stderr
        ));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::basis::ControlFamily;
    use crate::units::mhz_to_rad as mhz;
    use approx::assert_abs_diff_eq;

    fn constant_drive(omega: f64, t_total: f64) -> ControlField {
        ControlField::new(ControlFamily::Sfb, 1, vec![omega, 0.0, 0.0], t_total, 0.0).unwrap()
    }

    fn synthetic_map(deltas: Vec<f64>, alphas: Vec<f64>, value: f64) -> FidelityMap {
        let values = vec![vec![value; deltas.len()]; alphas.len()];
        FidelityMap {
            deltas,
            alphas,
            values,
            gamma: 0.0,
        }
    }

    #[test]
    fn zero_field_never_transfers_population() {
        let t_total = 1e-7;
        let field = constant_drive(0.0, t_total);
        let deltas = linspace(-mhz(15.0), mhz(15.0), 11);
        let alphas = linspace(0.5, 1.5, 5);
        let map = fidelity_map(&field, &deltas, &alphas, 0.0, t_total, t_total / 2000.0).unwrap();
        for row in &map.values {
            for &f in row {
                assert_abs_diff_eq!(f, 0.0, epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn pi_pulse_row_matches_the_rabi_formula() {
        let omega = mhz(10.0);
        let t_pi = std::f64::consts::PI / omega;
        let field = constant_drive(omega, t_pi);
        let deltas = linspace(-2.0 * omega, 2.0 * omega, 41);
        let map = fidelity_map(&field, &deltas, &[1.0], 0.0, t_pi, t_pi / 4000.0).unwrap();
        for (j, &d) in deltas.iter().enumerate() {
            let w2 = omega * omega + d * d;
            let expect = omega * omega / w2 * (w2.sqrt() * t_pi / 2.0).sin().powi(2);
            assert_abs_diff_eq!(map.values[0][j], expect, epsilon = 1e-8);
        }
    }

    #[test]
    fn constant_pulse_map_is_symmetric_in_detuning() {
        let omega = mhz(10.0);
        let t_pi = std::f64::consts::PI / omega;
        let field = constant_drive(omega, t_pi);
        let deltas = linspace(-mhz(20.0), mhz(20.0), 21); // symmetric grid
        let alphas = linspace(0.6, 1.4, 5);
        let map = fidelity_map(&field, &deltas, &alphas, 0.0, t_pi, t_pi / 2000.0).unwrap();
        let n = deltas.len();
        for row in &map.values {
            for j in 0..n / 2 {
                assert_abs_diff_eq!(row[j], row[n - 1 - j], epsilon = 1e-10);
            }
        }
    }

    #[test]
    fn area_above_counts_cells_with_half_width_edges() {
        let deltas = linspace(0.0, 10.0, 11);
        let alphas = linspace(0.0, 2.0, 5);

        let ones = synthetic_map(deltas.clone(), alphas.clone(), 1.0 - 1e-12);
        assert_abs_diff_eq!(ones.area_above(0.9).unwrap(), 20.0, epsilon = 1e-9);

        let zeros = synthetic_map(deltas.clone(), alphas.clone(), 0.0);
        assert_abs_diff_eq!(zeros.area_above(0.5).unwrap(), 0.0);

        // left half of the δ axis above threshold: area within one cell
        // column of half the rectangle
        let mut half = synthetic_map(deltas.clone(), alphas.clone(), 0.0);
        for row in &mut half.values {
            for j in 0..6 {
                row[j] = 0.95;
            }
        }
        let area = half.area_above(0.9).unwrap();
        assert!((area - 10.0).abs() <= 2.0 + 1e-9, "area {area}");

        // single-point axes own no extent
        let point = synthetic_map(vec![0.0], alphas, 1.0 - 1e-12);
        assert_abs_diff_eq!(point.area_above(0.5).unwrap(), 0.0);
    }

    #[test]
    fn area_above_is_monotone_in_threshold() {
        let omega = mhz(10.0);
        let t_pi = std::f64::consts::PI / omega;
        let field = constant_drive(omega, t_pi);
        let deltas = linspace(-mhz(15.0), mhz(15.0), 31);
        let alphas = linspace(0.5, 1.5, 31);
        let map = fidelity_map(&field, &deltas, &alphas, 0.0, t_pi, t_pi / 2000.0).unwrap();
        let thresholds = [0.1, 0.3, 0.5, 0.7, 0.9, 0.99];
        let areas: Vec<f64> = thresholds
            .iter()
            .map(|&t| map.area_above(t).unwrap())
            .collect();
        for pair in areas.windows(2) {
            assert!(pair[1] <= pair[0] + 1e-12, "areas {areas:?}");
        }
        assert!(areas[0] > 0.0);
    }

    #[test]
    fn map_rejects_bad_inputs() {
        let t_total = 1e-7;
        let field = constant_drive(mhz(10.0), t_total);
        assert!(fidelity_map(&field, &[], &[1.0], 0.0, t_total, 1e-9).is_err());
        assert!(fidelity_map(&field, &[0.0], &[], 0.0, t_total, 1e-9).is_err());
        assert!(fidelity_map(&field, &[0.0], &[1.0], -1.0, t_total, 1e-9).is_err());
        assert!(fidelity_map(&field, &[f64::NAN], &[1.0], 0.0, t_total, 1e-9).is_err());
        let map = fidelity_map(&field, &[0.0], &[1.0], 0.0, t_total, 1e-9).unwrap();
        assert!(map.area_above(0.0).is_err());
        assert!(map.area_above(1.0).is_err());
    }

    #[test]
    fn sweep_at_zero_rate_reduces_to_the_closed_system_estimate() {
        let omega = mhz(10.0);
        let t_pi = std::f64::consts::PI / omega;
        let field = constant_drive(omega, t_pi);
        let ensemble = EnsembleModel::from_fwhm(mhz(10.0), 15, 2000).unwrap();
        let points =
            dephasing_sweep(&field, &[0.0], ensemble, t_pi, t_pi / 500.0, 7).unwrap();
        let spec = ObjectiveSpec::state_transfer(PureState::up(), ensemble, t_pi)
            .with_dt(t_pi / 500.0);
        let (f, se) = monte_carlo_fidelity(&field, &spec, 7).unwrap();
        assert_eq!(points[0].fidelity, f);
        assert_eq!(points[0].stderr, se);
    }

    #[test]
    fn fidelity_decays_with_dephasing_and_saturates_at_one_half() {
        let omega = mhz(10.0);
        let t_pi = std::f64::consts::PI / omega;
        let field = constant_drive(omega, t_pi);
        let ensemble = EnsembleModel::from_fwhm(mhz(10.0), 15, 500).unwrap();
        let gammas = [0.0, 5e5, 2e6, 1e7, 5e7];
        let points =
            dephasing_sweep(&field, &gammas, ensemble, t_pi, t_pi / 500.0, 11).unwrap();
        for pair in points.windows(2) {
            assert!(
                pair[1].fidelity <= pair[0].fidelity + 1e-9,
                "{} then {}",
                pair[0].fidelity,
                pair[1].fidelity
            );
        }
        // fully dephased limit: γT ≫ 1 with the drive still strong enough
        // to keep mixing populations (Ω²T/γ ≫ 1, else dephasing freezes
        // them — the Zeno regime). Here γT = 20 and Ω²T/γ ≈ 200, so every
        // ensemble member relaxes to the maximally mixed state and F → 1/2;
        // the envelope magnitude is what matters, not its phase profile.
        let t_long = 1e-6;
        let gamma = 2e7;
        for field in [
            constant_drive(omega, t_long),
            ControlField::new(
                ControlFamily::Pm,
                1,
                vec![omega, mhz(12.0), mhz(5.0)],
                t_long,
                0.0,
            )
            .unwrap(),
        ] {
            let strong =
                dephasing_sweep(&field, &[gamma], ensemble, t_long, t_long / 2000.0, 11).unwrap();
            assert!(
                (strong[0].fidelity - 0.5).abs() < 0.05 * 0.5,
                "F = {} should sit at the mixed-state plateau",
                strong[0].fidelity
            );
        }
    }

    #[test]
    fn csv_exports_are_well_formed() {
        let omega = mhz(10.0);
        let t_pi = std::f64::consts::PI / omega;
        let field = constant_drive(omega, t_pi);
        let deltas = linspace(-mhz(5.0), mhz(5.0), 3);
        let map = fidelity_map(&field, &deltas, &[1.0, 1.2], 0.0, t_pi, t_pi / 500.0).unwrap();
        let csv = map.to_csv();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], "delta_MHz,alpha,fidelity");
        assert_eq!(lines.len(), 1 + 2 * 3);
        assert!(lines[1].starts_with("-5.000000000,1.000000000,"));

        let points = vec![SweepPoint {
            gamma: 2e6,
            fidelity: 0.875,
            stderr: 1e-3,
        }];
        let sweep = sweep_to_csv(&points);
        let lines: Vec<&str> = sweep.lines().collect();
        assert_eq!(lines[0], "gamma_MHz,fidelity,stderr");
        assert!(lines[1].starts_with("2.000000000,0.875"));
    }
}
