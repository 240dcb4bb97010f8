//! Command-line front end: config ingestion, subcommand dispatch and
//! bit-stable CSV/JSON emission.
//!
//! Exit codes: 0 success, 1 validation/configuration error, 2 numerical
//! failure. Diagnostics and warnings go to stderr; data goes to the
//! requested files or stdout.

mod config;
mod output;
mod repro;

use std::f64::consts::PI;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};

use inedor::linewidth::{scaling_fit, stationary_field_exact, width_closed_form, ScanParameter};
use inedor::oracle::{bin_integrated_density, compare_to_analytic, simulate_density};
use inedor::rabi::{effective_precession, fast_driving_check, FastDriving};
use inedor::spectrum::{peak_metrics, sweep};

use config::{resolve, Resolved, RunConfig};
use output::{
    atomic_write, bounds_csv, oracle_csv, scan_csv, spectrum_csv, summary_json, write_spectrum_csv,
    write_summary_json, Summary,
};

#[derive(Debug)]
pub enum CliError {
    Validation(String),
    Numerical(String),
    Io(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Validation(_) | CliError::Io(_) => 1,
            CliError::Numerical(_) => 2,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Validation(m) | CliError::Numerical(m) | CliError::Io(m) => m,
        }
    }
}

impl From<inedor::Error> for CliError {
    fn from(e: inedor::Error) -> Self {
        use inedor::Error::*;
        match e {
            QuadratureFailure { .. } | FlatSpectrum | InsufficientRange(_) => {
                CliError::Numerical(e.to_string())
            }
            _ => CliError::Validation(e.to_string()),
        }
    }
}

#[derive(Parser)]
#[command(
    name = "inedor",
    version,
    about = "Interaction-enhanced double-resonance spectra for cold three-level gases"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

/// Model selection and numerics shared by all physics subcommands.
#[derive(Args, Debug)]
struct ModelArgs {
    /// Built-in parameter set: hydrogen-2d or hydrogen-2d-physical-sign.
    #[arg(long)]
    preset: Option<String>,
    /// JSON config file (flat, unit-suffixed keys).
    #[arg(long)]
    config: Option<PathBuf>,
    /// Quadrature relative tolerance.
    #[arg(long)]
    tolerance: Option<f64>,
}

impl ModelArgs {
    fn to_config(&self) -> Result<RunConfig, CliError> {
        let mut cfg = match (&self.config, &self.preset) {
            (Some(path), None) => RunConfig::from_file(path)?,
            (None, Some(name)) => RunConfig {
                preset: Some(name.clone()),
                ..RunConfig::default()
            },
            (Some(_), Some(_)) => {
                return Err(CliError::Validation(
                    "give either --preset or --config, not both".into(),
                ))
            }
            (None, None) => {
                return Err(CliError::Validation(
                    "a model is required: --preset <name> or --config <path>".into(),
                ))
            }
        };
        if self.tolerance.is_some() {
            cfg.quadrature_rel_tol = self.tolerance;
        }
        Ok(cfg)
    }
}

#[derive(Subcommand)]
enum Command {
    /// Integrate the gradient spectrum over a drive or probe sweep.
    Spectrum {
        #[command(flatten)]
        model: ModelArgs,
        /// Swept transition: drive or probe.
        #[arg(long)]
        mode: Option<String>,
        /// Grid points.
        #[arg(long)]
        points: Option<usize>,
        /// Sweep span in Hz.
        #[arg(long)]
        span_hz: Option<f64>,
        /// Sweep center in Hz.
        #[arg(long)]
        center_hz: Option<f64>,
        /// Static-field gradient in G/cm.
        #[arg(long)]
        gradient: Option<f64>,
        /// CSV output path (stdout when omitted).
        #[arg(long)]
        out: Option<PathBuf>,
        /// JSON summary path.
        #[arg(long)]
        summary: Option<PathBuf>,
    },
    /// Tabulate the probe-frequency bounds against the field offset.
    Bounds {
        #[command(flatten)]
        model: ModelArgs,
        /// Lowest field offset in G.
        #[arg(long)]
        h_min: Option<f64>,
        /// Highest field offset in G.
        #[arg(long)]
        h_max: Option<f64>,
        #[arg(long, default_value_t = 1001)]
        points: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Closed-form and exact linewidth predictions.
    Linewidth {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long)]
        summary: Option<PathBuf>,
    },
    /// Time-domain histogram check of the lineshape density.
    Oracle {
        #[command(flatten)]
        model: ModelArgs,
        /// Field offset in G (default: the stationary offset).
        #[arg(long)]
        h_gauss: Option<f64>,
        #[arg(long, default_value_t = 100)]
        bins: usize,
        #[arg(long, default_value_t = 1_000_000)]
        samples: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Scan density, drive field or gradient and fit the width exponent.
    Scan {
        #[command(flatten)]
        model: ModelArgs,
        /// Scanned parameter: density, drive or gradient.
        #[arg(long)]
        param: String,
        #[arg(long, default_value_t = 0.5)]
        min_factor: f64,
        #[arg(long, default_value_t = 5.0)]
        max_factor: f64,
        #[arg(long, default_value_t = 5)]
        steps: usize,
        /// Grid points per sweep.
        #[arg(long, default_value_t = 1501)]
        points: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the reference reproduction suite and print a markdown report.
    Repro {
        #[arg(long)]
        out: Option<PathBuf>,
        /// Quadrature relative tolerance.
        #[arg(long)]
        tolerance: Option<f64>,
    },
}

fn main() -> ExitCode {
    if let Err(e) = init_thread_pool() {
        eprintln!("error: {}", e.message());
        return ExitCode::from(e.exit_code());
    }
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match dispatch(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e.message());
            ExitCode::from(e.exit_code())
        }
    }
}

/// `INEDOR_THREADS` caps the sweep worker count.
fn init_thread_pool() -> Result<(), CliError> {
    if let Ok(raw) = std::env::var("INEDOR_THREADS") {
        let n: usize = raw.parse().map_err(|_| {
            CliError::Validation(format!("INEDOR_THREADS must be a count, got \"{raw}\""))
        })?;
        if n == 0 {
            return Err(CliError::Validation(
                "INEDOR_THREADS must be at least 1".into(),
            ));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| CliError::Validation(format!("thread pool: {e}")))?;
    }
    Ok(())
}

fn dispatch(command: Command) -> Result<(), CliError> {
    match command {
        Command::Spectrum {
            model,
            mode,
            points,
            span_hz,
            center_hz,
            gradient,
            out,
            summary,
        } => {
            let mut cfg = model.to_config()?;
            if mode.is_some() {
                cfg.sweep_mode = mode;
            }
            if points.is_some() {
                cfg.sweep_points = points;
            }
            if span_hz.is_some() {
                cfg.sweep_span_hz = span_hz;
            }
            if center_hz.is_some() {
                cfg.sweep_center_hz = center_hz;
            }
            if gradient.is_some() {
                cfg.gradient_gauss_per_cm = gradient;
            }
            if out.is_some() {
                cfg.out_csv = out;
            }
            if summary.is_some() {
                cfg.summary_json = summary;
            }
            run_spectrum(&resolve(&cfg)?)
        }
        Command::Bounds {
            model,
            h_min,
            h_max,
            points,
            out,
        } => run_bounds(&resolve(&model.to_config()?)?, h_min, h_max, points, out),
        Command::Linewidth { model, summary } => {
            let mut cfg = model.to_config()?;
            if summary.is_some() {
                cfg.summary_json = summary;
            }
            run_linewidth(&resolve(&cfg)?)
        }
        Command::Oracle {
            model,
            h_gauss,
            bins,
            samples,
            out,
        } => {
            let mut cfg = model.to_config()?;
            if out.is_some() {
                cfg.out_csv = out;
            }
            run_oracle(&resolve(&cfg)?, h_gauss, bins, samples)
        }
        Command::Scan {
            model,
            param,
            min_factor,
            max_factor,
            steps,
            points,
            out,
        } => {
            let mut cfg = model.to_config()?;
            if out.is_some() {
                cfg.out_csv = out;
            }
            run_scan(
                &resolve(&cfg)?,
                &param,
                min_factor,
                max_factor,
                steps,
                points,
            )
        }
        Command::Repro { out, tolerance } => run_repro(out, tolerance),
    }
}

/// Fast-driving and asymptotic-regime warnings for the current model.
fn collect_warnings(r: &Resolved) -> Vec<String> {
    let mut warnings = Vec::new();
    // The zero-detuning precession rate is the slowest in the sample, so
    // checking there is conservative.
    let state = effective_precession(0.0, r.model.pair());
    if let FastDriving::Warn { ratio } =
        fast_driving_check(&state, r.detection_tau, r.fast_driving_threshold)
    {
        warnings.push(format!(
            "fast driving marginal at zero detuning: omega_eff*tau = {ratio:.2} < {}",
            r.fast_driving_threshold
        ));
    }
    let ratio = r.model.delta_h_c().abs() / r.model.pair().h_drive;
    if ratio < 10.0 {
        warnings.push(format!(
            "closed-form width assumes |dHc| >> H_d; ratio is only {ratio:.2}"
        ));
    }
    warnings
}

fn base_summary(r: &Resolved, warnings: Vec<String>) -> Summary {
    let closed = width_closed_form(&r.model);
    Summary {
        delta_h_c_gauss: r.model.delta_h_c(),
        h_star_gauss: stationary_field_exact(&r.model),
        width_drive_hz: closed.delta_omega13 / (2.0 * PI),
        width_probe_hz: closed.delta_omega12 / (2.0 * PI),
        max_to_min_hz: None,
        baseline: None,
        warnings,
    }
}

fn run_spectrum(r: &Resolved) -> Result<(), CliError> {
    let warnings = collect_warnings(r);
    for w in &warnings {
        eprintln!("warning: {w}");
    }
    let result = sweep(&r.sweep, &r.model, &r.profile, &r.settings)?;
    match &r.out_csv {
        Some(path) => write_spectrum_csv(&result, path)?,
        None => print!("{}", spectrum_csv(&result)),
    }
    if let Some(path) = &r.summary_json {
        let (_, _, dist_hz) = peak_metrics(&result)?;
        let mut summary = base_summary(r, warnings);
        summary.max_to_min_hz = Some(dist_hz);
        summary.baseline = Some(result.baseline);
        write_summary_json(&summary, path)?;
    }
    Ok(())
}

fn run_bounds(
    r: &Resolved,
    h_min: Option<f64>,
    h_max: Option<f64>,
    points: usize,
    out: Option<PathBuf>,
) -> Result<(), CliError> {
    if points < 2 {
        return Err(CliError::Validation(
            "bounds needs at least 2 points".into(),
        ));
    }
    let scale = width_closed_form(&r.model)
        .h_star
        .abs()
        .max(r.model.pair().h_drive);
    let lo = h_min.unwrap_or(-3.0 * scale);
    let hi = h_max.unwrap_or(3.0 * scale);
    if !(hi > lo) {
        return Err(CliError::Validation(format!(
            "bounds range is empty: [{lo}, {hi}]"
        )));
    }
    let (gas, pair) = (r.model.gas(), r.model.pair());
    let rows: Vec<(f64, f64, f64)> = (0..points)
        .map(|i| {
            let h = lo + (hi - lo) * i as f64 / (points - 1) as f64;
            let b = inedor::lineshape::probe_bounds(h, gas, pair);
            (h, b.lower - pair.omega12_0, b.upper - pair.omega12_0)
        })
        .collect();
    let text = bounds_csv(&rows);
    match out {
        Some(path) => atomic_write(&path, text.as_bytes()),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn run_linewidth(r: &Resolved) -> Result<(), CliError> {
    let warnings = collect_warnings(r);
    for w in &warnings {
        eprintln!("warning: {w}");
    }
    let summary = base_summary(r, warnings);
    match &r.summary_json {
        Some(path) => write_summary_json(&summary, path),
        None => {
            print!("{}", summary_json(&summary));
            Ok(())
        }
    }
}

fn run_oracle(
    r: &Resolved,
    h_gauss: Option<f64>,
    bins: usize,
    samples: usize,
) -> Result<(), CliError> {
    if bins < 10 {
        return Err(CliError::Validation("oracle needs at least 10 bins".into()));
    }
    if samples < 10_000 {
        return Err(CliError::Validation(
            "oracle needs at least 1e4 samples".into(),
        ));
    }
    let h = h_gauss.unwrap_or_else(|| width_closed_form(&r.model).h_star.abs());
    let emp = simulate_density(h, &r.model, bins, samples);
    let analytic = bin_integrated_density(&emp, &r.settings, h)?;
    let deviation = compare_to_analytic(&emp, &r.model, h, &r.settings)?;
    eprintln!("max interior relative deviation: {deviation:.3e}");
    let text = oracle_csv(&emp, &analytic);
    match &r.out_csv {
        Some(path) => atomic_write(path, text.as_bytes()),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn run_scan(
    r: &Resolved,
    param: &str,
    min_factor: f64,
    max_factor: f64,
    steps: usize,
    points: usize,
) -> Result<(), CliError> {
    let param = match param {
        "density" => ScanParameter::Density,
        "drive" => ScanParameter::DriveField,
        "gradient" => ScanParameter::Gradient,
        other => {
            return Err(CliError::Validation(format!(
                "param must be density, drive or gradient, got \"{other}\""
            )))
        }
    };
    if steps < 2 || !(min_factor > 0.0) || !(max_factor > min_factor) {
        return Err(CliError::Validation(
            "scan needs steps >= 2 and 0 < min-factor < max-factor".into(),
        ));
    }
    let ratio = max_factor / min_factor;
    let factors: Vec<f64> = (0..steps)
        .map(|i| min_factor * ratio.powf(i as f64 / (steps - 1) as f64))
        .collect();
    let fit = scaling_fit(&r.model, &r.profile, param, &factors, points, &r.settings)?;
    println!("exponent = {:.4}", fit.exponent);
    if let Some(path) = &r.out_csv {
        atomic_write(path, scan_csv(&fit.samples).as_bytes())?;
    }
    Ok(())
}

fn run_repro(out: Option<PathBuf>, tolerance: Option<f64>) -> Result<(), CliError> {
    let settings = inedor::QuadSettings {
        rel_tol: tolerance.unwrap_or(1e-6),
        ..inedor::QuadSettings::default()
    };
    let outcomes = repro::run_repro_suite(&settings)?;
    let report = repro::markdown_report(&outcomes);
    print!("{report}");
    if let Some(path) = out {
        atomic_write(&path, report.as_bytes())?;
    }
    let failed = outcomes.iter().filter(|c| !c.pass).count();
    if failed > 0 {
        return Err(CliError::Numerical(format!(
            "{failed} reproduction case(s) failed"
        )));
    }
    Ok(())
}
