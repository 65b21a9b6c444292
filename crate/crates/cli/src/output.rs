//! Series CSV, summary JSON and gnuplot scripts.

use std::io::{self, Write};

use levysim_core::{ExperimentConfig, FitColumn, FitResult, MomentSeries, Weighting};
use serde::Serialize;

pub const SERIES_HEADER: &str = "t,sigma_mean,sigma_stderr,rms_sigma,m2_mean,m4_mean,m6_mean";
pub const SWEEP_HEADER: &str = "value,c,c_stderr,r_squared";

/// 17 significant digits, `e` exponent, no grouping.
pub fn fmt_float(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn write_series_csv<W: Write>(series: &MomentSeries, mut out: W) -> io::Result<()> {
    writeln!(out, "{SERIES_HEADER}")?;
    for k in 0..series.len() {
        writeln!(
            out,
            "{},{},{},{},{},{},{}",
            series.times[k],
            fmt_float(series.sigma_mean[k]),
            fmt_float(series.sigma_stderr[k]),
            fmt_float(series.rms_sigma[k]),
            fmt_float(series.m2_mean[k]),
            fmt_float(series.m4_mean[k]),
            fmt_float(series.m6_mean[k]),
        )?;
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum RecordMode {
    Geometric,
    All,
}

/// Every setting that influences the output, defaults included.
#[derive(Debug, Clone, Serialize)]
pub struct ResolvedConfig {
    #[serde(flatten)]
    pub experiment: ExperimentConfig,
    pub record: RecordMode,
    pub fit_window: (u64, u64),
    pub fit_column: FitColumn,
    pub weighting: Weighting,
}

#[derive(Debug, Clone, Serialize)]
pub struct FitSummary {
    pub c: f64,
    pub c_stderr: f64,
    pub r_squared: f64,
    pub window: (u64, u64),
    pub column: FitColumn,
    pub log_prefactor: f64,
    pub n_points: usize,
}

impl FitSummary {
    pub fn new(fit: &FitResult, column: FitColumn) -> Self {
        Self {
            c: fit.c,
            c_stderr: fit.c_stderr,
            r_squared: fit.r_squared,
            window: fit.window,
            column,
            log_prefactor: fit.log_prefactor,
            n_points: fit.n_points,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Versions {
    pub levysim: &'static str,
}

impl Versions {
    pub fn current() -> Self {
        Self {
            levysim: env!("CARGO_PKG_VERSION"),
        }
    }
}

/// Field order here is the key order in the file.
#[derive(Debug, Clone, Serialize)]
pub struct Summary {
    pub config: ResolvedConfig,
    pub fit: FitSummary,
    pub runtime_seconds: Option<f64>,
    pub versions: Versions,
}

pub fn write_json<W: Write, T: Serialize>(value: &T, mut out: W) -> io::Result<()> {
    serde_json::to_writer_pretty(&mut out, value)?;
    writeln!(out)
}

fn column_index(column: FitColumn) -> &'static str {
    match column {
        FitColumn::SigmaMean => "2",
        FitColumn::RmsSigma => "4",
        FitColumn::M4Root => "($6**0.25)",
        FitColumn::M6Root => "($7**(1.0/6.0))",
    }
}

/// Log-log plot of the fitted column with the fitted power law overlaid.
pub fn write_series_plot<W: Write>(
    series_file: &str,
    fit: &FitResult,
    column: FitColumn,
    mut out: W,
) -> io::Result<()> {
    let (lo, hi) = fit.window;
    writeln!(out, "# sigma(t) on log-log axes with the fitted power law")?;
    writeln!(
        out,
        "# uncomment to render: set terminal pngcairo; set output 'sigma.png'"
    )?;
    writeln!(out, "set datafile separator ','")?;
    writeln!(out, "set logscale xy")?;
    writeln!(out, "set xlabel 't / T'")?;
    writeln!(out, "set ylabel 'sigma(t)'")?;
    writeln!(out, "set key left top")?;
    writeln!(out, "c = {}", fmt_float(fit.c))?;
    writeln!(out, "lnA = {}", fmt_float(fit.log_prefactor))?;
    writeln!(out, "f(t) = exp(lnA) * t**c")?;
    writeln!(
        out,
        "plot '{series_file}' every ::1 using 1:{} with points pt 7 ps 0.5 title 'data', \\",
        column_index(column)
    )?;
    writeln!(
        out,
        "     [{lo}:{hi}] f(x) with lines lw 2 title sprintf('fit t^{{%.3f}}', c)"
    )?;
    Ok(())
}

/// One row of a sweep. `c` and friends are NaN when the point failed.
#[derive(Debug, Clone, Serialize)]
pub struct SweepPoint {
    pub value: String,
    pub c: f64,
    pub c_stderr: f64,
    pub r_squared: f64,
}

pub fn write_sweep_csv<W: Write>(points: &[SweepPoint], mut out: W) -> io::Result<()> {
    writeln!(out, "{SWEEP_HEADER}")?;
    for p in points {
        writeln!(
            out,
            "{},{},{},{}",
            p.value,
            fmt_float(p.c),
            fmt_float(p.c_stderr),
            fmt_float(p.r_squared)
        )?;
    }
    Ok(())
}

pub fn write_sweep_plot<W: Write>(
    sweep_file: &str,
    parameter: &str,
    numeric: bool,
    mut out: W,
) -> io::Result<()> {
    writeln!(out, "# spreading exponent c against {parameter}")?;
    writeln!(
        out,
        "# uncomment to render: set terminal pngcairo; set output 'sweep.png'"
    )?;
    writeln!(out, "set datafile separator ','")?;
    writeln!(out, "set xlabel '{parameter}'")?;
    writeln!(out, "set ylabel 'c'")?;
    writeln!(out, "set yrange [0.4:1.1]")?;
    if numeric {
        writeln!(
            out,
            "plot '{sweep_file}' every ::1 using 1:2:3 with yerrorbars pt 7 title 'c'"
        )?;
    } else {
        writeln!(
            out,
            "plot '{sweep_file}' every ::1 using 0:2:3:xticlabels(1) with yerrorbars pt 7 title 'c'"
        )?;
    }
    Ok(())
}
