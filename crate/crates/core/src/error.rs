/// Errors raised by contract checks across the crate.
///
/// Numerical code here fails loudly on malformed inputs (wrong parameter
/// counts, out-of-range steps, un-normalized states) instead of propagating
/// NaNs into long-running optimizations.
#[derive(Debug, Clone, thiserror::Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("matrix is not Hermitian (max deviation {dev:.3e})")]
    NotHermitian { dev: f64 },

    #[error("matrix is not unitary (max deviation from U\u{2020}U = I: {dev:.3e})")]
    NotUnitary { dev: f64 },

    #[error("state is not normalized (|norm\u{b2} - 1| = {dev:.3e})")]
    NotNormalized { dev: f64 },

    #[error("invalid density matrix: {0}")]
    InvalidDensity(String),

    #[error("parameter vector has wrong length: expected {expected}, got {got}")]
    ParamLength { expected: usize, got: usize },

    #[error("decay curve never crosses the threshold {threshold}")]
    NoCrossing { threshold: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;
