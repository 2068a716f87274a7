use thiserror::Error;

/// Errors raised across the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("photon index must be 0 or 1, got {0}")]
    PhotonIndex(usize),

    #[error("fock cutoff n_max={n_max} too small for |alpha|={alpha_abs}: tail {tail:e} >= {tail_tol:e}")]
    CutoffTail {
        n_max: usize,
        alpha_abs: f64,
        tail: f64,
        tail_tol: f64,
    },

    #[error("fock cutoff must be at least 1, got {0}")]
    CutoffTooSmall(usize),

    #[error("efficiency must lie in [0, 1], got {0}")]
    Efficiency(f64),

    #[error("transmittance must lie in [0, 1], got {0}")]
    Transmittance(f64),

    #[error("need at least 2 modes, got {0}")]
    TooFewModes(usize),

    #[error("length mismatch: expected {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },

    #[error("state is not normalized: norm^2 = {0}")]
    NotNormalized(f64),

    #[error("correlation has non-negligible imaginary part {0:e}")]
    ImaginaryPart(f64),

    #[error("no measured mode in assignment")]
    EmptySubset,

    #[error("mode index {index} out of range for {n_modes} modes")]
    ModeIndex { index: usize, n_modes: usize },

    #[error("LHV enumeration supports at most {max} modes, got {got}")]
    EnumerationTooLarge { max: usize, got: usize },

    #[error("unknown inequality '{0}' (expected b3zb, b3prime, b4zb or mabk:N)")]
    UnknownInequality(String),

    #[error("{0}")]
    InvalidConfig(String),

    #[error("no violation at eta=1: best value {value} <= bound {bound}")]
    NoViolation { value: f64, bound: f64 },

    #[error("violation persists down to eta={eta}: value {value} > bound {bound}")]
    ThresholdBelowBracket { eta: f64, value: f64, bound: f64 },

    #[error("objective is not monotone in eta: f({eta_lo})={f_lo} > f({eta_hi})={f_hi}")]
    NonMonotone {
        eta_lo: f64,
        f_lo: f64,
        eta_hi: f64,
        f_hi: f64,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
