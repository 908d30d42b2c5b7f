//! Unit conversions between the crate-internal convention (angular
//! frequencies in rad/s, times in seconds) and the interface convention
//! (ordinary frequencies in MHz, times in nanoseconds).

pub use std::f64::consts::TAU;

/// Ordinary frequency in MHz → angular frequency in rad/s.
pub fn mhz_to_rad(f_mhz: f64) -> f64 {
    f_mhz * 1e6 * TAU
}

/// Angular frequency in rad/s → ordinary frequency in MHz.
pub fn rad_to_mhz(omega: f64) -> f64 {
    omega / (1e6 * TAU)
}

/// Ordinary rate in MHz → plain rate in 1/s (no 2π). Used for decay rates.
pub fn mhz_to_rate(f_mhz: f64) -> f64 {
    f_mhz * 1e6
}

/// Plain rate in 1/s → ordinary rate in MHz.
pub fn rate_to_mhz(rate: f64) -> f64 {
    rate / 1e6
}

pub fn ns_to_s(t_ns: f64) -> f64 {
    t_ns * 1e-9
}

pub fn s_to_ns(t_s: f64) -> f64 {
    t_s * 1e9
}

pub fn us_to_s(t_us: f64) -> f64 {
    t_us * 1e-6
}

pub fn s_to_us(t_s: f64) -> f64 {
    t_s * 1e6
}
