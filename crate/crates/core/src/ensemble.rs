//! Noise-ensemble runs.
//!
//! Each trajectory draws its own label sequence from the seed
//! `mix_seed(master_seed, index)`, evolves the position eigenstate under it and
//! records moments on a fixed schedule. Trajectories run on a rayon pool and
//! are reduced in index order, so the output depends only on the config.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Result, SimError};
use crate::levy::{generate_sequence, LevyParams, OperatorLabel};
use crate::moments::Moments;
use crate::qkr::{KickedRotor, ResonanceParams};
use crate::qw::{CoinParams, CoinedWalk, WalkerState};
use crate::rng::mix_seed;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SystemConfig {
    Qkr(ResonanceParams),
    Qw(CoinParams),
}

impl SystemConfig {
    pub fn validate(&self) -> Result<()> {
        match self {
            SystemConfig::Qkr(p) => p.validate(),
            SystemConfig::Qw(p) => p.validate(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub system: SystemConfig,
    pub levy: LevyParams,
    pub n_steps: u64,
    pub n_trajectories: u64,
    pub master_seed: u64,
    pub record_schedule: Vec<u64>,
}

impl ExperimentConfig {
    /// Config recording on [`geometric_schedule`].
    pub fn new(
        system: SystemConfig,
        levy: LevyParams,
        n_steps: u64,
        n_trajectories: u64,
        master_seed: u64,
    ) -> Result<Self> {
        let config = Self {
            system,
            levy,
            n_steps,
            n_trajectories,
            master_seed,
            record_schedule: geometric_schedule(n_steps),
        };
        config.validate()?;
        Ok(config)
    }

    pub fn validate(&self) -> Result<()> {
        self.system.validate()?;
        if self.n_steps == 0 {
            return Err(SimError::InvalidConfig("n_steps must be at least 1".into()));
        }
        if self.n_trajectories == 0 {
            return Err(SimError::InvalidConfig(
                "n_trajectories must be at least 1".into(),
            ));
        }
        if self.record_schedule.is_empty() {
            return Err(SimError::InvalidConfig("record schedule is empty".into()));
        }
        if self.record_schedule.windows(2).any(|w| w[0] >= w[1]) {
            return Err(SimError::InvalidConfig(
                "record schedule must be strictly increasing".into(),
            ));
        }
        let first = self.record_schedule[0];
        let last = *self.record_schedule.last().unwrap();
        if first < 1 || last > self.n_steps {
            return Err(SimError::InvalidConfig(format!(
                "record schedule must lie in [1, {}]",
                self.n_steps
            )));
        }
        Ok(())
    }
}

/// Every `t <= 16`, then `round(16 * 1.1^k)` without duplicates, closed with
/// `n_steps` itself.
pub fn geometric_schedule(n_steps: u64) -> Vec<u64> {
    let mut times: Vec<u64> = (1..=n_steps.min(16)).collect();
    let mut k = 1;
    loop {
        let t = (16.0 * 1.1f64.powi(k)).round() as u64;
        if t > n_steps {
            break;
        }
        if times.last() != Some(&t) {
            times.push(t);
        }
        k += 1;
    }
    if times.last() != Some(&n_steps) {
        times.push(n_steps);
    }
    times
}

/// Every step from 1 to `n_steps`.
pub fn full_schedule(n_steps: u64) -> Vec<u64> {
    (1..=n_steps).collect()
}

/// Moments of one trajectory at the recorded times.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrajectorySeries {
    pub times: Vec<u64>,
    pub moments: Vec<Moments>,
}

/// Ensemble statistics at the recorded times.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MomentSeries {
    pub times: Vec<u64>,
    /// Mean over trajectories of `sqrt(m2)`.
    pub sigma_mean: Vec<f64>,
    /// Standard error of `sigma_mean`.
    pub sigma_stderr: Vec<f64>,
    /// `sqrt` of the mean `m2`.
    pub rms_sigma: Vec<f64>,
    pub m2_mean: Vec<f64>,
    pub m4_mean: Vec<f64>,
    pub m6_mean: Vec<f64>,
    pub n_trajectories: u64,
}

impl MomentSeries {
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    /// Reduces trajectories in the order given.
    pub fn aggregate(trajectories: &[TrajectorySeries]) -> Result<Self> {
        let first = trajectories
            .first()
            .ok_or_else(|| SimError::InvalidConfig("no trajectories to aggregate".into()))?;
        let n_times = first.times.len();
        if trajectories.iter().any(|t| t.times != first.times) {
            return Err(SimError::InvalidConfig(
                "trajectories were recorded on different schedules".into(),
            ));
        }
        let n = trajectories.len() as f64;
        let mut out = MomentSeries {
            times: first.times.clone(),
            sigma_mean: vec![0.0; n_times],
            sigma_stderr: vec![0.0; n_times],
            rms_sigma: vec![0.0; n_times],
            m2_mean: vec![0.0; n_times],
            m4_mean: vec![0.0; n_times],
            m6_mean: vec![0.0; n_times],
            n_trajectories: trajectories.len() as u64,
        };
        for k in 0..n_times {
            let (mut s, mut m2, mut m4, mut m6) = (0.0, 0.0, 0.0, 0.0);
            for traj in trajectories {
                let m = traj.moments[k];
                s += m.sigma();
                m2 += m.m2;
                m4 += m.m4;
                m6 += m.m6;
            }
            let mean = s / n;
            out.sigma_mean[k] = mean;
            out.m2_mean[k] = m2 / n;
            out.m4_mean[k] = m4 / n;
            out.m6_mean[k] = m6 / n;
            out.rms_sigma[k] = (m2 / n).sqrt();
            if trajectories.len() > 1 {
                let var = trajectories
                    .iter()
                    .map(|t| (t.moments[k].sigma() - mean).powi(2))
                    .sum::<f64>()
                    / (n - 1.0);
                out.sigma_stderr[k] = (var / n).sqrt();
            }
        }
        Ok(out)
    }
}

/// Evolves the system from its initial state under an explicit label
/// sequence, recording moments at `schedule` (times in `[1, labels.len()]`).
pub fn run_labels(
    system: &SystemConfig,
    labels: &[OperatorLabel],
    schedule: &[u64],
) -> Result<TrajectorySeries> {
    let mut moments = Vec::with_capacity(schedule.len());
    let mut next = schedule.iter().peekable();
    match system {
        SystemConfig::Qkr(params) => {
            let rotor = KickedRotor::new(params)?;
            let mut state = rotor.initial_state();
            for (t, label) in (1u64..).zip(labels) {
                let map = match label {
                    OperatorLabel::U0 => &rotor.u0,
                    OperatorLabel::U1 => &rotor.u1,
                };
                state.step(map)?;
                if next.peek() == Some(&&t) {
                    moments.push(state.moments());
                    next.next();
                }
            }
        }
        SystemConfig::Qw(params) => {
            let walk = CoinedWalk::new(params)?;
            let mut state = WalkerState::at_origin(walk.chirality, labels.len());
            for (t, label) in (1u64..).zip(labels) {
                let coin = match label {
                    OperatorLabel::U0 => &walk.u0,
                    OperatorLabel::U1 => &walk.u1,
                };
                state.step(coin);
                if next.peek() == Some(&&t) {
                    moments.push(state.moments());
                    next.next();
                }
            }
        }
    }
    if moments.len() != schedule.len() {
        return Err(SimError::InvalidConfig(
            "record schedule extends past the label sequence".into(),
        ));
    }
    Ok(TrajectorySeries {
        times: schedule.to_vec(),
        moments,
    })
}

/// Noiseless reference: `U0` at every step.
pub fn run_periodic(config: &ExperimentConfig) -> Result<TrajectorySeries> {
    config.validate()?;
    let labels = vec![OperatorLabel::U0; config.n_steps as usize];
    run_labels(&config.system, &labels, &config.record_schedule)
}

/// One noise realisation.
pub fn run_trajectory(
    config: &ExperimentConfig,
    trajectory_index: u64,
) -> Result<TrajectorySeries> {
    let seed = mix_seed(config.master_seed, trajectory_index);
    let sequence = generate_sequence(seed, &config.levy, config.n_steps as usize)?;
    run_labels(&config.system, &sequence.labels, &config.record_schedule)
}

/// Runs the ensemble on the current rayon pool.
pub fn run_ensemble(config: &ExperimentConfig) -> Result<MomentSeries> {
    config.validate()?;
    let trajectories = (0..config.n_trajectories)
        .into_par_iter()
        .map(|i| run_trajectory(config, i))
        .collect::<Result<Vec<_>>>()?;
    MomentSeries::aggregate(&trajectories)
}

/// Runs the ensemble on a dedicated pool of `workers` threads.
pub fn run_ensemble_with_workers(
    config: &ExperimentConfig,
    workers: usize,
) -> Result<MomentSeries> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers.max(1))
        .build()
        .map_err(|e| SimError::InvalidConfig(format!("cannot start worker pool: {e}")))?;
    pool.install(|| run_ensemble(config))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qw::Chirality;
    use std::f64::consts::FRAC_PI_4;

    fn qkr_config(k1: f64, k2: f64, n_steps: u64, n_traj: u64) -> ExperimentConfig {
        ExperimentConfig::new(
            SystemConfig::Qkr(ResonanceParams::new(1, 3, k1, k2).unwrap()),
            LevyParams::new(1.0).unwrap(),
            n_steps,
            n_traj,
            11,
        )
        .unwrap()
    }

    #[test]
    fn schedule_shape() {
        let s = geometric_schedule(2000);
        assert_eq!(&s[..16], &(1..=16).collect::<Vec<_>>()[..]);
        assert!(s.windows(2).all(|w| w[0] < w[1]));
        assert_eq!(*s.last().unwrap(), 2000);
        assert!(s.contains(&18) && s.contains(&19));
        assert_eq!(geometric_schedule(5), vec![1, 2, 3, 4, 5]);
    }

    #[test]
    fn config_validation() {
        let mut c = qkr_config(1.0, -1.0, 10, 1);
        assert!(c.validate().is_ok());
        c.n_steps = 0;
        assert!(c.validate().is_err());
        let mut c = qkr_config(1.0, -1.0, 10, 1);
        c.record_schedule = vec![3, 2];
        assert!(c.validate().is_err());
        c.record_schedule = vec![0, 2];
        assert!(c.validate().is_err());
        c.record_schedule = vec![2, 11];
        assert!(c.validate().is_err());
        let mut c = qkr_config(1.0, -1.0, 10, 1);
        c.n_trajectories = 0;
        assert!(c.validate().is_err());
    }

    #[test]
    fn single_trajectory_ensemble() {
        let c = qkr_config(1.0, -1.0, 50, 1);
        let traj = run_trajectory(&c, 0).unwrap();
        let ens = run_ensemble(&c).unwrap();
        for (k, m) in traj.moments.iter().enumerate() {
            assert_eq!(ens.sigma_mean[k], m.sigma());
            assert_eq!(ens.m2_mean[k], m.m2);
            assert_eq!(ens.sigma_stderr[k], 0.0);
        }
    }

    #[test]
    fn equal_operators_ignore_noise() {
        let mut a = qkr_config(0.7, 0.7, 60, 1);
        let mut b = a.clone();
        b.master_seed = 999;
        b.levy = LevyParams::new(0.3).unwrap();
        assert_eq!(run_ensemble(&a).unwrap(), run_ensemble(&b).unwrap());
        a.n_trajectories = 3;
        assert_eq!(run_periodic(&a).unwrap(), run_trajectory(&a, 2).unwrap());

        let qw = ExperimentConfig::new(
            SystemConfig::Qw(CoinParams::new(FRAC_PI_4, FRAC_PI_4, Chirality::Symmetric).unwrap()),
            LevyParams::new(1.0).unwrap(),
            80,
            2,
            5,
        )
        .unwrap();
        let periodic = run_periodic(&qw).unwrap();
        assert_eq!(run_trajectory(&qw, 0).unwrap(), periodic);
        assert_eq!(run_trajectory(&qw, 1).unwrap(), periodic);
    }
}
