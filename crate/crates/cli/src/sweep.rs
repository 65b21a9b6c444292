//! Parameter sweeps: one ensemble per value, one exponent per row.

use std::fs::{self, File};
use std::io::BufWriter;
use std::path::Path;
use std::time::Instant;

use anyhow::{bail, Context, Result};
use log::warn;
use serde::Serialize;

use crate::angle::parse_angle;
use crate::output::{
    write_json, write_sweep_csv, write_sweep_plot, ResolvedConfig, SweepPoint, Versions,
};
use crate::{execute, write_run, ExperimentArgs, SweepArgs, SystemKind};

pub const SWEEP_CSV: &str = "sweep.csv";
pub const SWEEP_JSON: &str = "sweep.json";
pub const SWEEP_PLOT: &str = "sweep.gp";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepParameter {
    Alpha,
    /// Sets `theta1 = theta`, `theta2 = -theta`.
    Theta,
    Pq,
}

impl SweepParameter {
    pub fn name(self) -> &'static str {
        match self {
            SweepParameter::Alpha => "alpha",
            SweepParameter::Theta => "theta",
            SweepParameter::Pq => "pq",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(untagged)]
pub enum SweepValue {
    Number(f64),
    Ratio(u64, u64),
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepSpec {
    pub parameter: SweepParameter,
    pub labels: Vec<String>,
    #[serde(skip)]
    pub values: Vec<SweepValue>,
}

fn parse_range(text: &str) -> Result<Vec<f64>> {
    let parts: Vec<&str> = text.split(':').collect();
    let [start, stop, step] = parts[..] else {
        bail!("range `{text}` is not START:STOP:STEP");
    };
    let start: f64 = start
        .trim()
        .parse()
        .with_context(|| format!("bad start in `{text}`"))?;
    let stop: f64 = stop
        .trim()
        .parse()
        .with_context(|| format!("bad stop in `{text}`"))?;
    let step: f64 = step
        .trim()
        .parse()
        .with_context(|| format!("bad step in `{text}`"))?;
    if step.is_nan() || step <= 0.0 || stop.is_nan() || stop < start {
        bail!("range `{text}` must have STEP > 0 and STOP >= START");
    }
    let count = ((stop - start) / step + 1e-9).floor() as usize + 1;
    if count > 10_000 {
        bail!("range `{text}` has too many points");
    }
    Ok((0..count).map(|k| start + k as f64 * step).collect())
}

impl SweepSpec {
    /// Parses `alpha=0.2:2:0.2`, `alpha=0.5,1`, `theta=pi/8,pi/4` or
    /// `pq=1/3,2/5`.
    pub fn parse(text: &str) -> Result<Self> {
        let (name, list) = text
            .split_once('=')
            .with_context(|| format!("sweep `{text}` is not NAME=VALUES"))?;
        let items: Vec<&str> = list
            .split(',')
            .map(str::trim)
            .filter(|s| !s.is_empty())
            .collect();
        if items.is_empty() {
            bail!("sweep `{text}` has no values");
        }
        let (parameter, values) = match name.trim() {
            "alpha" => {
                let mut values = Vec::new();
                for item in &items {
                    if item.contains(':') {
                        values.extend(parse_range(item)?);
                    } else {
                        values.push(
                            item.parse::<f64>()
                                .with_context(|| format!("bad alpha `{item}`"))?,
                        );
                    }
                }
                if let Some(a) = values.iter().find(|a| !(**a > 0.0 && **a <= 2.0)) {
                    bail!("alpha {a} is outside (0, 2]");
                }
                (
                    SweepParameter::Alpha,
                    values
                        .into_iter()
                        .map(SweepValue::Number)
                        .collect::<Vec<_>>(),
                )
            }
            "theta" => {
                let mut values = Vec::new();
                for item in &items {
                    let theta = parse_angle(item)?;
                    if !(0.0..std::f64::consts::FRAC_PI_2).contains(&theta) {
                        bail!("theta `{item}` is outside [0, pi/2)");
                    }
                    values.push(SweepValue::Number(theta));
                }
                (SweepParameter::Theta, values)
            }
            "pq" => {
                let mut values = Vec::new();
                for item in &items {
                    let (p, q) = item
                        .split_once('/')
                        .with_context(|| format!("`{item}` is not P/Q"))?;
                    let p: u64 = p
                        .trim()
                        .parse()
                        .with_context(|| format!("bad p in `{item}`"))?;
                    let q: u64 = q
                        .trim()
                        .parse()
                        .with_context(|| format!("bad q in `{item}`"))?;
                    values.push(SweepValue::Ratio(p, q));
                }
                (SweepParameter::Pq, values)
            }
            other => bail!("unknown sweep parameter `{other}`; expected alpha, theta or pq"),
        };
        let labels = values
            .iter()
            .map(|v| match v {
                SweepValue::Number(x) => format!("{x}"),
                SweepValue::Ratio(p, q) => format!("{p}/{q}"),
            })
            .collect();
        Ok(SweepSpec {
            parameter,
            labels,
            values,
        })
    }

    fn check_system(&self, system: SystemKind) -> Result<()> {
        match (self.parameter, system) {
            (SweepParameter::Theta, SystemKind::Qkr) => bail!("theta sweeps need --system qw"),
            (SweepParameter::Pq, SystemKind::Qw) => bail!("pq sweeps need --system qkr"),
            _ => Ok(()),
        }
    }

    fn apply(&self, index: usize, base: &ExperimentArgs) -> ExperimentArgs {
        let mut args = base.clone();
        match (&self.values[index], self.parameter) {
            (SweepValue::Number(a), SweepParameter::Alpha) => args.alpha = *a,
            (SweepValue::Number(t), SweepParameter::Theta) => {
                args.theta1 = *t;
                args.theta2 = -*t;
            }
            (SweepValue::Ratio(p, q), _) => {
                args.p = *p;
                args.q = *q;
            }
            _ => unreachable!("value kind matches parameter"),
        }
        args
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SweepSummary {
    pub config: ResolvedConfig,
    pub sweep: SweepSpec,
    pub points: Vec<SweepPoint>,
    pub runtime_seconds: Option<f64>,
    pub versions: Versions,
}

#[derive(Debug, Clone)]
pub struct SweepReport {
    pub summary: SweepSummary,
}

impl SweepReport {
    pub fn print(&self) {
        println!(
            "{:>12}  {:>8}  {:>8}  {:>8}",
            self.summary.sweep.parameter.name(),
            "c",
            "stderr",
            "r²"
        );
        for p in &self.summary.points {
            println!(
                "{:>12}  {:>8.4}  {:>8.4}  {:>8.5}",
                p.value, p.c, p.c_stderr, p.r_squared
            );
        }
    }
}

fn buffered(dir: &Path, name: &str) -> Result<BufWriter<File>> {
    let path = dir.join(name);
    Ok(BufWriter::new(File::create(&path).with_context(|| {
        format!("cannot create {}", path.display())
    })?))
}

/// Runs every point of the sweep. A point whose run or fit fails is kept as
/// a NaN row.
pub fn run_sweep(args: &SweepArgs) -> Result<SweepReport> {
    let start = Instant::now();
    let base = &args.experiment;
    let spec = SweepSpec::parse(&args.sweep)?;
    spec.check_system(base.system)?;
    let base_config = base.resolve()?;
    let out = &base.out;
    fs::create_dir_all(out).with_context(|| format!("cannot create {}", out.display()))?;
    let workers = base.workers();

    let mut points = Vec::with_capacity(spec.values.len());
    for (k, label) in spec.labels.iter().enumerate() {
        let point_args = spec.apply(k, base);
        let outcome = point_args
            .resolve()
            .and_then(|config| execute(&config, workers));
        let point = match outcome {
            Ok(report) => {
                write_run(
                    &report,
                    out,
                    &format!("series_{k:03}.csv"),
                    base.omit_runtime,
                )?;
                SweepPoint {
                    value: label.clone(),
                    c: report.fit.c,
                    c_stderr: report.fit.c_stderr,
                    r_squared: report.fit.r_squared,
                }
            }
            Err(e) => {
                warn!(
                    "sweep point {}={label} failed: {e:#}",
                    spec.parameter.name()
                );
                SweepPoint {
                    value: label.clone(),
                    c: f64::NAN,
                    c_stderr: f64::NAN,
                    r_squared: f64::NAN,
                }
            }
        };
        points.push(point);
    }

    write_sweep_csv(&points, buffered(out, SWEEP_CSV)?)?;
    let numeric = spec.parameter != SweepParameter::Pq;
    write_sweep_plot(
        SWEEP_CSV,
        spec.parameter.name(),
        numeric,
        buffered(out, SWEEP_PLOT)?,
    )?;
    let summary = SweepSummary {
        config: base_config,
        sweep: spec,
        points,
        runtime_seconds: (!base.omit_runtime).then(|| start.elapsed().as_secs_f64()),
        versions: Versions::current(),
    };
    write_json(&summary, buffered(out, SWEEP_JSON)?)?;
    Ok(SweepReport { summary })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn alpha_range_is_inclusive() {
        let spec = SweepSpec::parse("alpha=0.2:2:0.2").unwrap();
        assert_eq!(spec.values.len(), 10);
        assert_eq!(spec.parameter, SweepParameter::Alpha);
        let SweepValue::Number(last) = spec.values[9] else {
            panic!()
        };
        assert!((last - 2.0).abs() < 1e-12);
    }

    #[test]
    fn theta_and_pq_lists() {
        let spec = SweepSpec::parse("theta=pi/8,pi/4,3*pi/8").unwrap();
        assert_eq!(spec.values.len(), 3);
        let spec = SweepSpec::parse("pq=1/3,1/4,2/5").unwrap();
        assert_eq!(spec.labels, vec!["1/3", "1/4", "2/5"]);
        assert_eq!(spec.values[2], SweepValue::Ratio(2, 5));
    }

    #[test]
    fn rejects_bad_sweeps() {
        for bad in [
            "alpha=0:1:0.5",
            "alpha=1:0:0.1",
            "alpha=2.5",
            "theta=pi/2",
            "pq=1",
            "beta=1",
            "alpha=",
        ] {
            assert!(SweepSpec::parse(bad).is_err(), "{bad}");
        }
    }
}
