//! Resonant quantum kicked rotor and coined quantum walk driven by a
//! power-law alternation of two one-step unitaries.
//!
//! A noise realisation is a sequence of `U0`/`U1` labels in which the number
//! of consecutive `U0` steps before each `U1` follows a truncated power law
//! with tail index `alpha` ([`levy`]). Either system is evolved exactly under
//! that sequence ([`qkr`], [`qw`]), moments of the wavefunction are averaged
//! over an ensemble of realisations ([`ensemble`]) and the spreading exponent
//! `c` of `sigma(t) ~ t^c` is fitted in log-log coordinates ([`fit`]).
//!
//! ```
//! use levysim_core::{ExperimentConfig, LevyParams, ResonanceParams, SystemConfig};
//! use levysim_core::{fit_exponent, run_ensemble, FitColumn};
//!
//! let config = ExperimentConfig::new(
//!     SystemConfig::Qkr(ResonanceParams::new(1, 3, 1.0, -1.0).unwrap()),
//!     LevyParams::new(1.0).unwrap(),
//!     200,
//!     4,
//!     7,
//! )
//! .unwrap();
//! let series = run_ensemble(&config).unwrap();
//! let fit = fit_exponent(&series, (25, 200), FitColumn::SigmaMean).unwrap();
//! assert!(fit.c > 0.0 && fit.c < 1.5);
//! ```

pub mod bessel;
pub mod ensemble;
pub mod error;
pub mod fit;
pub mod levy;
pub mod moments;
pub mod qkr;
pub mod qw;
pub mod rng;

pub use bessel::{bessel_j_row, KickKernel};
pub use ensemble::{
    full_schedule, geometric_schedule, run_ensemble, run_ensemble_with_workers, run_labels,
    run_periodic, run_trajectory, ExperimentConfig, MomentSeries, SystemConfig, TrajectorySeries,
};
pub use error::{Result, SimError};
pub use fit::{
    default_window, fit_exponent, fit_exponent_weighted, FitColumn, FitResult, Weighting,
};
pub use levy::{generate_sequence, LevyParams, NoiseSequence, OperatorLabel};
pub use moments::Moments;
pub use qkr::{
    resonance_phase, KickedRotor, PhaseConvention, ResonanceParams, RotorMap, RotorState,
};
pub use qw::{coin_matrix, Chirality, Coin, CoinParams, CoinedWalk, WalkerState};
