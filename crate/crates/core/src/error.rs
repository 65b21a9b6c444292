use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SimError {
    #[error("tail index alpha must lie in (0, 2], got {0}")]
    InvalidAlpha(f64),
    #[error("time step T must be positive and finite, got {0}")]
    InvalidTimeStep(f64),
    #[error("density is undefined for negative time {0}")]
    NegativeTime(f64),
    #[error("uniform variate must lie in [0, 1), got {0}")]
    InvalidUniform(f64),
    #[error("kick strength must be finite, got {0}")]
    NonFiniteKappa(f64),
    #[error("coin angle must be finite, got {0}")]
    NonFiniteAngle(f64),
    #[error("invalid resonance {p}/{q}: need q >= 1, p >= 1 and gcd(p, q) = 1")]
    InvalidResonance { p: u64, q: u64 },
    #[error("Bessel tolerance must be positive, got {0}")]
    InvalidTolerance(f64),
    #[error("lattice growth to {0} sites exceeds the allocation limit")]
    LatticeTooLarge(usize),
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("fit needs at least 3 usable points in window [{lo}, {hi}], found {found}")]
    InsufficientPoints { lo: u64, hi: u64, found: usize },
    #[error("cannot take the logarithm of {value} at t = {t}")]
    NonPositiveValue { t: u64, value: f64 },
}

pub type Result<T> = std::result::Result<T, SimError>;
