//! Front end for `levysim`: single experiments and parameter sweeps that
//! write series CSV, summary JSON and gnuplot scripts.

pub mod angle;
pub mod output;
pub mod sweep;

use std::ffi::OsString;
use std::fs::{self, File};
use std::io::BufWriter;
use std::path::{Path, PathBuf};
use std::time::Instant;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use levysim_core::{
    default_window, fit_exponent, fit_exponent_weighted, full_schedule, generate_sequence,
    geometric_schedule, rng::mix_seed, run_ensemble_with_workers, Chirality, CoinParams,
    ExperimentConfig, FitColumn, FitResult, LevyParams, MomentSeries, PhaseConvention,
    ResonanceParams, SystemConfig, Weighting,
};

use crate::angle::parse_angle;
use crate::output::{
    write_json, write_series_csv, write_series_plot, FitSummary, RecordMode, ResolvedConfig,
    Summary, Versions,
};
pub use crate::sweep::{run_sweep, SweepParameter, SweepReport, SweepSpec};

pub const SERIES_FILE: &str = "series.csv";
pub const SUMMARY_FILE: &str = "summary.json";
pub const PLOT_FILE: &str = "plot.gp";
pub const WORKERS_ENV: &str = "LEVY_SIM_WORKERS";

#[derive(Debug, Parser)]
#[command(
    name = "levysim",
    version,
    about = "Kicked rotor and quantum walk under power-law waiting-time noise"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run one ensemble and fit its spreading exponent.
    Run(ExperimentArgs),
    /// Run one ensemble per value of a swept parameter.
    Sweep(SweepArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SystemKind {
    Qkr,
    Qw,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ConventionArg {
    Standard,
    PaperLiteral,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ChiralityArg {
    Plus,
    Symmetric,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum RecordArg {
    Geometric,
    All,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ColumnArg {
    SigmaMean,
    RmsSigma,
}

fn angle_arg(s: &str) -> std::result::Result<f64, String> {
    parse_angle(s).map_err(|e| e.to_string())
}

#[derive(Debug, Clone, Args)]
pub struct ExperimentArgs {
    #[arg(long, value_enum)]
    pub system: SystemKind,
    /// Tail index of the waiting-time law, in (0, 2].
    #[arg(long, default_value_t = 1.0)]
    pub alpha: f64,
    #[arg(long, default_value_t = 2000)]
    pub steps: u64,
    #[arg(long, default_value_t = 200)]
    pub trajectories: u64,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    /// Output directory, created if missing.
    #[arg(long)]
    pub out: PathBuf,

    #[arg(long, default_value_t = 1)]
    pub p: u64,
    #[arg(long, default_value_t = 3)]
    pub q: u64,
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    pub kappa1: f64,
    #[arg(long, default_value_t = -1.0, allow_negative_numbers = true)]
    pub kappa2: f64,
    #[arg(long, value_enum, default_value = "standard")]
    pub phase_convention: ConventionArg,

    /// Coin angle of U0 in radians; accepts forms like `pi/3`.
    #[arg(long, default_value = "pi/3", value_parser = angle_arg, allow_hyphen_values = true)]
    pub theta1: f64,
    /// Coin angle of U1 in radians.
    #[arg(long, default_value = "pi/6", value_parser = angle_arg, allow_hyphen_values = true)]
    pub theta2: f64,
    #[arg(long, value_enum, default_value = "plus")]
    pub chirality: ChiralityArg,

    /// Fit window `LO:HI` in steps; defaults to `steps/8:steps`.
    #[arg(long)]
    pub fit_window: Option<String>,
    #[arg(long, value_enum, default_value = "sigma-mean")]
    pub fit_column: ColumnArg,
    /// Weight fit points by the inverse variance of ln sigma.
    #[arg(long)]
    pub weighted: bool,
    #[arg(long, value_enum, default_value = "geometric")]
    pub record: RecordArg,

    /// Worker threads; defaults to the available cores.
    #[arg(long, env = WORKERS_ENV)]
    pub workers: Option<usize>,
    /// Write `runtime_seconds: null` so reruns are byte-identical.
    #[arg(long)]
    pub omit_runtime: bool,
    /// Also write the first trajectory's label sequence as a 0/1 line.
    #[arg(long)]
    pub dump_sequence: bool,
}

#[derive(Debug, Clone, Args)]
pub struct SweepArgs {
    #[command(flatten)]
    pub experiment: ExperimentArgs,
    /// `alpha=START:STOP:STEP`, `theta=pi/8,pi/4` (theta2 = -theta) or
    /// `pq=1/3,1/4,2/5`.
    #[arg(long)]
    pub sweep: String,
}

/// Parses `LO:HI`.
pub fn parse_window(text: &str) -> Result<(u64, u64)> {
    let (lo, hi) = text
        .split_once(':')
        .with_context(|| format!("fit window `{text}` is not LO:HI"))?;
    let lo: u64 = lo
        .trim()
        .parse()
        .with_context(|| format!("bad window start in `{text}`"))?;
    let hi: u64 = hi
        .trim()
        .parse()
        .with_context(|| format!("bad window end in `{text}`"))?;
    if lo >= hi {
        bail!("fit window `{text}` is empty");
    }
    Ok((lo, hi))
}

#[derive(Debug, Parser)]
struct FlagsOnly {
    #[command(flatten)]
    args: ExperimentArgs,
}

impl ExperimentArgs {
    /// Parses the flags of `levysim run` without the program or subcommand name.
    pub fn parse_flags<I, T>(flags: I) -> std::result::Result<Self, clap::Error>
    where
        I: IntoIterator<Item = T>,
        T: Into<OsString> + Clone,
    {
        let argv =
            std::iter::once(OsString::from("levysim")).chain(flags.into_iter().map(Into::into));
        FlagsOnly::try_parse_from(argv).map(|f| f.args)
    }

    pub fn workers(&self) -> usize {
        self.workers.unwrap_or_else(|| {
            std::thread::available_parallelism()
                .map(|n| n.get())
                .unwrap_or(1)
        })
    }

    pub fn system_config(&self) -> Result<SystemConfig> {
        Ok(match self.system {
            SystemKind::Qkr => {
                let convention = match self.phase_convention {
                    ConventionArg::Standard => PhaseConvention::Standard,
                    ConventionArg::PaperLiteral => PhaseConvention::PaperLiteral,
                };
                SystemConfig::Qkr(
                    ResonanceParams::new(self.p, self.q, self.kappa1, self.kappa2)?
                        .with_convention(convention),
                )
            }
            SystemKind::Qw => {
                let chirality = match self.chirality {
                    ChiralityArg::Plus => Chirality::Plus,
                    ChiralityArg::Symmetric => Chirality::Symmetric,
                };
                SystemConfig::Qw(CoinParams::new(self.theta1, self.theta2, chirality)?)
            }
        })
    }

    pub fn resolve(&self) -> Result<ResolvedConfig> {
        let levy = LevyParams::new(self.alpha)?;
        let mut experiment = ExperimentConfig::new(
            self.system_config()?,
            levy,
            self.steps,
            self.trajectories,
            self.seed,
        )?;
        let record = match self.record {
            RecordArg::Geometric => RecordMode::Geometric,
            RecordArg::All => {
                experiment.record_schedule = full_schedule(self.steps);
                RecordMode::All
            }
        };
        debug_assert!(
            record == RecordMode::All
                || experiment.record_schedule == geometric_schedule(self.steps)
        );
        let fit_window = match &self.fit_window {
            Some(w) => parse_window(w)?,
            None => default_window(self.steps),
        };
        let fit_column = match self.fit_column {
            ColumnArg::SigmaMean => FitColumn::SigmaMean,
            ColumnArg::RmsSigma => FitColumn::RmsSigma,
        };
        let weighting = if self.weighted {
            Weighting::InverseVariance
        } else {
            Weighting::Unweighted
        };
        Ok(ResolvedConfig {
            experiment,
            record,
            fit_window,
            fit_column,
            weighting,
        })
    }
}

/// Everything a single run produced.
#[derive(Debug, Clone)]
pub struct RunReport {
    pub config: ResolvedConfig,
    pub series: MomentSeries,
    pub fit: FitResult,
    /// Exponents of `m4^(1/4)` and `m6^(1/6)`, when fittable.
    pub higher: [Option<FitResult>; 2],
    pub runtime_seconds: f64,
}

fn create_file(dir: &Path, name: &str) -> Result<BufWriter<File>> {
    let path = dir.join(name);
    let file = File::create(&path).with_context(|| format!("cannot create {}", path.display()))?;
    Ok(BufWriter::new(file))
}

/// Runs the ensemble and fit without touching the filesystem.
pub fn execute(config: &ResolvedConfig, workers: usize) -> Result<RunReport> {
    let start = Instant::now();
    let series = run_ensemble_with_workers(&config.experiment, workers)?;
    let fit = fit_exponent_weighted(
        &series,
        config.fit_window,
        config.fit_column,
        config.weighting,
    )
    .context("power-law fit failed")?;
    let higher = [FitColumn::M4Root, FitColumn::M6Root]
        .map(|col| fit_exponent(&series, config.fit_window, col).ok());
    Ok(RunReport {
        config: config.clone(),
        series,
        fit,
        higher,
        runtime_seconds: start.elapsed().as_secs_f64(),
    })
}

/// Writes series CSV, summary JSON and plot script for a finished run.
pub fn write_run(
    report: &RunReport,
    dir: &Path,
    series_name: &str,
    omit_runtime: bool,
) -> Result<Summary> {
    fs::create_dir_all(dir).with_context(|| format!("cannot create {}", dir.display()))?;
    let mut csv = create_file(dir, series_name)?;
    write_series_csv(&report.series, &mut csv)?;
    let summary = Summary {
        config: report.config.clone(),
        fit: FitSummary::new(&report.fit, report.config.fit_column),
        runtime_seconds: (!omit_runtime).then_some(report.runtime_seconds),
        versions: Versions::current(),
    };
    let stem = series_name.trim_end_matches(".csv");
    let (json_name, plot_name) = if series_name == SERIES_FILE {
        (SUMMARY_FILE.to_string(), PLOT_FILE.to_string())
    } else {
        (format!("{stem}.json"), format!("{stem}.gp"))
    };
    write_json(&summary, create_file(dir, &json_name)?)?;
    write_series_plot(
        series_name,
        &report.fit,
        report.config.fit_column,
        create_file(dir, &plot_name)?,
    )?;
    Ok(summary)
}

pub fn run_experiment(args: &ExperimentArgs) -> Result<RunReport> {
    let config = args.resolve()?;
    let report = execute(&config, args.workers())?;
    write_run(&report, &args.out, SERIES_FILE, args.omit_runtime)?;
    if args.dump_sequence {
        let seed = mix_seed(config.experiment.master_seed, 0);
        let seq = generate_sequence(
            seed,
            &config.experiment.levy,
            config.experiment.n_steps as usize,
        )?;
        fs::write(args.out.join("sequence.txt"), format!("{seq}\n"))?;
    }
    Ok(report)
}

fn print_report(report: &RunReport) {
    let fit = &report.fit;
    println!(
        "c = {:.4} ± {:.4}  (r² = {:.5}, window [{}, {}], {} points)",
        fit.c, fit.c_stderr, fit.r_squared, fit.window.0, fit.window.1, fit.n_points
    );
    for (name, f) in ["m4^(1/4)", "m6^(1/6)"].iter().zip(&report.higher) {
        if let Some(f) = f {
            println!("  {name}: exponent {:.4} (r² = {:.5})", f.c, f.r_squared);
        }
    }
}

/// Parses `argv` (program name first) and runs the CLI; returns the exit code.
pub fn run_cli<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    let result = match &cli.command {
        Command::Run(args) => run_experiment(args).map(|r| print_report(&r)),
        Command::Sweep(args) => run_sweep(args).map(|r| r.print()),
    };
    match result {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e:#}");
            1
        }
    }
}

/// `levysim run` with the given flags.
pub fn run_experiment_command<I, T>(flags: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let argv = ["levysim".into(), "run".into()]
        .into_iter()
        .chain(flags.into_iter().map(Into::into));
    run_cli(argv.collect::<Vec<OsString>>())
}

/// `levysim sweep` with the given flags.
pub fn run_sweep_command<I, T>(flags: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let argv = ["levysim".into(), "sweep".into()]
        .into_iter()
        .chain(flags.into_iter().map(Into::into));
    run_cli(argv.collect::<Vec<OsString>>())
}
