//! Truncated power-law waiting times and the U0/U1 label sequences they drive.
//!
//! The waiting-time density is flat on `[0, T)` and decays as `(T/t)^(alpha+1)`
//! beyond `T`, normalised to one. A waiting time `xi` drawn from it becomes an
//! integer `i = floor(xi / T)`: the number of `U0` steps that precede the next
//! `U1`. Sampling uses the closed-form inverse CDF.

use std::fmt;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Result, SimError};
use crate::rng::{rng_from_seed, NoiseRng};

/// Tail index and time step of the waiting-time law.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LevyParams {
    alpha: f64,
    time_step: f64,
}

impl LevyParams {
    /// Waiting-time law with the simulation time step `T = 1`.
    pub fn new(alpha: f64) -> Result<Self> {
        Self::with_time_step(alpha, 1.0)
    }

    pub fn with_time_step(alpha: f64, time_step: f64) -> Result<Self> {
        if !(alpha > 0.0 && alpha <= 2.0) {
            return Err(SimError::InvalidAlpha(alpha));
        }
        if !(time_step > 0.0 && time_step.is_finite()) {
            return Err(SimError::InvalidTimeStep(time_step));
        }
        Ok(Self { alpha, time_step })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn time_step(&self) -> f64 {
        self.time_step
    }

    /// Probability mass of the flat branch, `alpha / (1 + alpha)`.
    pub fn flat_mass(&self) -> f64 {
        self.alpha / (1.0 + self.alpha)
    }

    /// Probability density at time `t`.
    pub fn density(&self, t: f64) -> Result<f64> {
        if t.is_nan() || t < 0.0 {
            return Err(SimError::NegativeTime(t));
        }
        let (a, tau) = (self.alpha, self.time_step);
        let flat = a / ((1.0 + a) * tau);
        if t < tau {
            Ok(flat)
        } else {
            Ok(flat * (tau / t).powf(a + 1.0))
        }
    }

    /// Cumulative distribution `P(xi <= t)`.
    pub fn cdf(&self, t: f64) -> Result<f64> {
        if t.is_nan() || t < 0.0 {
            return Err(SimError::NegativeTime(t));
        }
        let (a, tau) = (self.alpha, self.time_step);
        if t < tau {
            Ok(self.flat_mass() * t / tau)
        } else {
            // flat_mass + (1 - (T/t)^a) / (1 + a), written to keep precision near 1
            Ok(1.0 - (tau / t).powf(a) / (1.0 + a))
        }
    }

    /// Inverse CDF: the unique `xi` with `cdf(xi) = gamma`.
    pub fn quantile(&self, gamma: f64) -> Result<f64> {
        if !(0.0..1.0).contains(&gamma) {
            return Err(SimError::InvalidUniform(gamma));
        }
        let (a, tau) = (self.alpha, self.time_step);
        if gamma < self.flat_mass() {
            Ok(gamma * (1.0 + a) * tau / a)
        } else {
            Ok(tau * ((1.0 + a) * (1.0 - gamma)).powf(-1.0 / a))
        }
    }

    /// Number of `U0` steps before the next `U1` for a given uniform variate.
    pub fn waiting_steps(&self, gamma: f64) -> Result<u64> {
        let xi = self.quantile(gamma)?;
        // `as` saturates, so an astronomically long wait becomes u64::MAX.
        Ok((xi / self.time_step).floor() as u64)
    }

    /// Draws one waiting interval from `rng`.
    pub fn sample_waiting_steps<R: Rng + ?Sized>(&self, rng: &mut R) -> u64 {
        let gamma: f64 = rng.gen();
        self.waiting_steps(gamma)
            .expect("rng.gen::<f64>() lies in [0, 1)")
    }
}

/// Which of the two one-step unitaries acts at a given time step.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum OperatorLabel {
    U0,
    U1,
}

impl OperatorLabel {
    pub fn as_char(self) -> char {
        match self {
            OperatorLabel::U0 => '0',
            OperatorLabel::U1 => '1',
        }
    }
}

/// Time-ordered labels of one noise realisation; `labels[0]` acts at t = 1.
#[derive(Debug, Clone, PartialEq)]
pub struct NoiseSequence {
    pub labels: Vec<OperatorLabel>,
    pub seed: u64,
    pub alpha: f64,
}

impl NoiseSequence {
    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    /// Fraction of steps that apply `U1`.
    pub fn u1_fraction(&self) -> f64 {
        let n1 = self
            .labels
            .iter()
            .filter(|&&l| l == OperatorLabel::U1)
            .count();
        n1 as f64 / self.labels.len().max(1) as f64
    }
}

/// One line of `0`/`1` characters, earliest step first.
impl fmt::Display for NoiseSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for label in &self.labels {
            write!(f, "{}", label.as_char())?;
        }
        Ok(())
    }
}

/// Expands waiting intervals into labels: each `i` contributes `i` copies of
/// `U0` followed by one `U1`. Output is cut at exactly `n_steps` labels.
pub fn labels_from_waits<I>(waits: I, n_steps: usize) -> Vec<OperatorLabel>
where
    I: IntoIterator<Item = u64>,
{
    let mut labels = Vec::with_capacity(n_steps);
    let mut waits = waits.into_iter();
    while labels.len() < n_steps {
        let Some(i) = waits.next() else { break };
        let room = (n_steps - labels.len()) as u64;
        let zeros = i.min(room) as usize;
        labels.extend(std::iter::repeat_n(OperatorLabel::U0, zeros));
        if labels.len() < n_steps {
            labels.push(OperatorLabel::U1);
        }
    }
    labels
}

/// Infinite stream of waiting intervals drawn from `rng`.
pub fn waits_from_rng<'a>(
    params: &'a LevyParams,
    rng: &'a mut NoiseRng,
) -> impl Iterator<Item = u64> + 'a {
    std::iter::repeat_with(move || params.sample_waiting_steps(rng))
}

/// Builds the `n_steps`-long label sequence for one seed.
pub fn generate_sequence(seed: u64, params: &LevyParams, n_steps: usize) -> Result<NoiseSequence> {
    if n_steps == 0 {
        return Err(SimError::InvalidConfig("n_steps must be at least 1".into()));
    }
    let mut rng = rng_from_seed(seed);
    let labels = labels_from_waits(waits_from_rng(params, &mut rng), n_steps);
    Ok(NoiseSequence {
        labels,
        seed,
        alpha: params.alpha(),
    })
}
