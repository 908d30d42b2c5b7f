//! Ensemble control of a driven two-level system.
//!
//! The crate covers the full pipeline for designing and vetting microwave
//! drive fields that act on an inhomogeneously broadened ensemble of
//! two-level systems:
//!
//! * [`twolevel`] — 2×2 states, unitaries, Hermitian generators, fidelities;
//! * [`basis`] — parametrized drive-field families (single-frequency combs
//!   and phase-modulated carriers), their complex envelopes, constraints,
//!   sideband predictions and spectral estimation;
//! * [`dynamics`] — detuning ensembles, piecewise-constant propagation,
//!   Lindblad pure dephasing, Ornstein–Uhlenbeck detuning noise;
//! * [`objective`] — ensemble-averaged state-transfer and gate objectives
//!   with amplitude-constraint penalties;
//! * [`optimizer`] — bounded Nelder–Mead and a deterministic multi-start
//!   harness;
//! * [`robustness`] — detuning × amplitude fidelity maps and dephasing
//!   sweeps;
//! * [`ddsim`] — XY-8 dynamical-decoupling simulation under static plus
//!   Ornstein–Uhlenbeck detuning noise, with coherence-time extraction.
//!
//! Unit conventions: every Hamiltonian coefficient, detuning, Rabi amplitude
//! and drive-field frequency parameter inside this crate is an *angular*
//! frequency in rad/s, and times are seconds. Interfaces that speak ordinary
//! frequencies (MHz) and nanoseconds live at the serialization boundary in
//! [`basis::FieldDocument`] and in the CLI; the conversion helpers are in
//! [`units`].

pub mod basis;
pub mod ddsim;
pub mod dynamics;
mod error;
pub mod objective;
pub mod optimizer;
pub mod robustness;
pub mod seeds;
pub mod twolevel;
pub mod units;

pub use error::{Error, Result};
