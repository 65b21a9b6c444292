//! Spreading exponent from a straight-line fit of `ln sigma` against `ln t`.

use log::warn;
use serde::{Deserialize, Serialize};

use crate::ensemble::MomentSeries;
use crate::error::{Result, SimError};

/// Which recorded curve to fit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FitColumn {
    /// Mean over trajectories of `sqrt(m2)`.
    #[default]
    SigmaMean,
    /// `sqrt` of the mean `m2`.
    RmsSigma,
    /// `(mean m4)^(1/4)`.
    M4Root,
    /// `(mean m6)^(1/6)`.
    M6Root,
}

impl FitColumn {
    pub fn values(self, series: &MomentSeries) -> Vec<f64> {
        match self {
            FitColumn::SigmaMean => series.sigma_mean.clone(),
            FitColumn::RmsSigma => series.rms_sigma.clone(),
            FitColumn::M4Root => series.m4_mean.iter().map(|m| m.powf(0.25)).collect(),
            FitColumn::M6Root => series.m6_mean.iter().map(|m| m.powf(1.0 / 6.0)).collect(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Weighting {
    #[default]
    Unweighted,
    /// Weights `(sigma / stderr)^2`, the inverse variance of `ln sigma`.
    /// Only meaningful for [`FitColumn::SigmaMean`].
    InverseVariance,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FitResult {
    pub c: f64,
    pub c_stderr: f64,
    pub log_prefactor: f64,
    pub r_squared: f64,
    pub window: (u64, u64),
    pub n_points: usize,
}

/// `[n_steps / 8, n_steps]`.
pub fn default_window(n_steps: u64) -> (u64, u64) {
    ((n_steps / 8).max(1), n_steps)
}

/// Least squares of `ln y = ln A + c ln t` over `t` in `window`.
///
/// Points with `y = 0` are skipped with a warning; negative or NaN values
/// are an error.
pub fn fit_power_law(
    times: &[u64],
    values: &[f64],
    weights: Option<&[f64]>,
    window: (u64, u64),
) -> Result<FitResult> {
    let (lo, hi) = window;
    if lo >= hi {
        return Err(SimError::InvalidConfig(format!(
            "fit window [{lo}, {hi}] is empty"
        )));
    }
    let mut points = Vec::new();
    for (k, (&t, &y)) in times.iter().zip(values).enumerate() {
        if t < lo || t > hi {
            continue;
        }
        if y == 0.0 {
            warn!("skipping zero value at t = {t} in power-law fit");
            continue;
        }
        if !y.is_finite() || y < 0.0 {
            return Err(SimError::NonPositiveValue { t, value: y });
        }
        let w = weights.map_or(1.0, |w| w[k]);
        points.push(((t as f64).ln(), y.ln(), w));
    }
    if points.len() < 3 || points.iter().all(|p| p.0 == points[0].0) {
        return Err(SimError::InsufficientPoints {
            lo,
            hi,
            found: points.len(),
        });
    }

    let sw: f64 = points.iter().map(|p| p.2).sum();
    let mx = points.iter().map(|p| p.2 * p.0).sum::<f64>() / sw;
    let my = points.iter().map(|p| p.2 * p.1).sum::<f64>() / sw;
    let (mut sxx, mut sxy, mut syy) = (0.0, 0.0, 0.0);
    for &(x, y, w) in &points {
        sxx += w * (x - mx) * (x - mx);
        sxy += w * (x - mx) * (y - my);
        syy += w * (y - my) * (y - my);
    }
    let c = sxy / sxx;
    let log_prefactor = my - c * mx;
    let ssr: f64 = points
        .iter()
        .map(|&(x, y, w)| w * (y - log_prefactor - c * x).powi(2))
        .sum();
    let n = points.len();
    let c_stderr = (ssr / (n as f64 - 2.0) / sxx).sqrt();
    let r_squared = if syy > 0.0 {
        (1.0 - ssr / syy).clamp(0.0, 1.0)
    } else {
        1.0
    };
    Ok(FitResult {
        c,
        c_stderr,
        log_prefactor,
        r_squared,
        window,
        n_points: n,
    })
}

/// Unweighted fit of one column of an ensemble series.
pub fn fit_exponent(
    series: &MomentSeries,
    window: (u64, u64),
    column: FitColumn,
) -> Result<FitResult> {
    fit_exponent_weighted(series, window, column, Weighting::Unweighted)
}

pub fn fit_exponent_weighted(
    series: &MomentSeries,
    window: (u64, u64),
    column: FitColumn,
    weighting: Weighting,
) -> Result<FitResult> {
    let values = column.values(series);
    match weighting {
        Weighting::Unweighted => fit_power_law(&series.times, &values, None, window),
        Weighting::InverseVariance => {
            if column != FitColumn::SigmaMean {
                return Err(SimError::InvalidConfig(
                    "inverse-variance weights exist only for sigma_mean".into(),
                ));
            }
            let weights = series
                .times
                .iter()
                .zip(series.sigma_mean.iter().zip(&series.sigma_stderr))
                .map(|(&t, (s, e))| {
                    if t < window.0 || t > window.1 {
                        Ok(0.0)
                    } else if *e > 0.0 {
                        Ok((s / e).powi(2))
                    } else {
                        Err(SimError::InvalidConfig(format!(
                            "zero standard error at t = {t} prevents weighting"
                        )))
                    }
                })
                .collect::<Result<Vec<_>>>()?;
            fit_power_law(&series.times, &values, Some(&weights), window)
        }
    }
}
