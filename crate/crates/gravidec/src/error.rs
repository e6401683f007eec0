//! Crate-wide error type.

use thiserror::Error;

/// Errors produced by the analytic and stochastic layers.
#[derive(Debug, Error)]
pub enum Error {
    /// An input that must be strictly positive (or non-negative) was not.
    #[error("invalid input: {name} must be {requirement}, got {value:e}")]
    InvalidInput {
        name: &'static str,
        requirement: &'static str,
        value: f64,
    },

    /// A spectrum was evaluated outside its declared domain.
    #[error("frequency {omega:e} rad/s outside spectrum domain [{min:e}, {max:e}] rad/s (no extrapolation)")]
    OutOfDomain { omega: f64, min: f64, max: f64 },

    /// The spectrum level lies below the vacuum floor at this frequency.
    #[error("spectrum level {chh:e} Hz^-1 below vacuum level {vacuum:e} Hz^-1 at omega = {omega:e} rad/s")]
    SubVacuum { chh: f64, vacuum: f64, omega: f64 },

    /// A named preset is missing from the catalog.
    #[error("unknown scenario '{name}'; available: {available}")]
    UnknownPreset { name: String, available: String },

    /// A text input (spectrum table, scenario file, config file) failed to parse.
    #[error("{path}:{line}: {message}")]
    Parse {
        path: String,
        line: usize,
        message: String,
    },

    /// The sampling grid cannot resolve the requested spectral content.
    #[error(
        "grid too coarse: Nyquist frequency {nyquist:e} rad/s below required {required:e} rad/s"
    )]
    GridTooCoarse { nyquist: f64, required: f64 },

    /// The run is shorter than the white-noise asymptotics need.
    #[error(
        "duration {duration:e} shorter than 50 correlation times (correlation time {correlation_time:e})"
    )]
    DurationTooShort {
        duration: f64,
        correlation_time: f64,
    },

    /// Two series that must share a grid do not.
    #[error("sampling grid mismatch: expected n={expected_n}, dt={expected_dt:e}; got n={got_n}, dt={got_dt:e}")]
    GridMismatch {
        expected_n: usize,
        expected_dt: f64,
        got_n: usize,
        got_dt: f64,
    },

    /// Periodogram segmentation does not fit the series.
    #[error("segment count {segments} does not fit series of length {len}")]
    SegmentTooLong { segments: usize, len: usize },

    /// Root bracketing failed: the target function does not change sign.
    #[error(
        "no sign change in bracket [{lo:e}, {hi:e}] kg: ratio(lo)={f_lo:e}, ratio(hi)={f_hi:e}"
    )]
    NoSignChange {
        lo: f64,
        hi: f64,
        f_lo: f64,
        f_hi: f64,
    },

    /// Underlying I/O failure.
    #[error("i/o error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn invalid(name: &'static str, requirement: &'static str, value: f64) -> Self {
        Error::InvalidInput {
            name,
            requirement,
            value,
        }
    }
}

/// Require a strictly positive finite value.
pub(crate) fn ensure_positive(name: &'static str, value: f64) -> Result<f64> {
    if value > 0.0 && value.is_finite() {
        Ok(value)
    } else {
        Err(Error::invalid(name, "strictly positive and finite", value))
    }
}

/// Require a non-negative finite value.
pub(crate) fn ensure_non_negative(name: &'static str, value: f64) -> Result<f64> {
    if value >= 0.0 && value.is_finite() {
        Ok(value)
    } else {
        Err(Error::invalid(name, "non-negative and finite", value))
    }
}
