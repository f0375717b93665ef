//! `tfsamp`: command-line access to the constants, transforms, density
//! scans and sampling experiments of `tfsamp-core`.
//!
//! Exit status is 0 on success (and when every verdict passes), 1 when a
//! checked inequality fails, and 2 on invalid input or runtime errors.

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};
use tfsamp_core::bounds::{
    compact_frame_bounds, planar_sampling_bound, sunzhou_check, thm_main_bound, CalibrationConstants, LogValue,
};
use tfsamp_core::geometry::{density_gamma, parse_region, DensityMode, DensityQuery};
use tfsamp_core::harness::{
    calibrate_constants, empirical_frame_bounds, read_records, run_sampling_experiment, ExperimentConfig,
    FrameExperiment,
};
use tfsamp_core::polyfock::{remez_ratio, PolyFunction};
use tfsamp_core::specfun::{nu, WindowSpec};
use tfsamp_core::tfcore::{Signal, SignalDesc, STFTGrid};

#[derive(Parser)]
#[command(name = "tfsamp", version, about = "Time-frequency sampling constants and experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Theorem {
    Main,
    Sunzhou,
    Compact,
    Planar,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Square,
    Disc,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate ν_n(R) or the constants of one of the sampling bounds.
    Constants {
        /// Print ν_n(R) for the given `n R`.
        #[arg(long, num_args = 2, value_names = ["N", "R"])]
        nu: Option<Vec<f64>>,
        #[arg(long, value_enum)]
        theorem: Option<Theorem>,
        #[arg(long, default_value_t = 0)]
        n: usize,
        #[arg(long = "R")]
        radius: Option<f64>,
        #[arg(long)]
        gamma: Option<f64>,
        #[arg(long, default_value_t = 2.0)]
        p: f64,
        /// Window as `hermite:n` or `hat:S`.
        #[arg(long, default_value = "hat:1")]
        window: String,
        #[arg(long = "C", default_value_t = 1.0)]
        c_numerical: f64,
    },
    /// Sample V_g f on a grid and write it as CSV (x, xi, re, im).
    Stft {
        /// JSON signal description.
        #[arg(long)]
        signal: PathBuf,
        #[arg(long)]
        window: String,
        #[arg(long)]
        trunc: f64,
        #[arg(long)]
        step: f64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Compare both sides of the polyanalytic Remez inequality.
    Remez {
        /// JSON file with `{"components": [[[re, im], ...], ...]}`.
        #[arg(long)]
        poly: PathBuf,
        #[arg(long)]
        region: String,
        #[arg(long)]
        rho: f64,
        #[arg(long = "R")]
        radius: f64,
        #[arg(long, default_value_t = 1.0)]
        kappa: f64,
        #[arg(long, default_value_t = 1.0)]
        c: f64,
    },
    /// Scan the (γ, R) density of a region.
    Density {
        #[arg(long)]
        region: String,
        #[arg(long = "R")]
        radius: f64,
        #[arg(long, value_enum, default_value = "square")]
        mode: Mode,
        /// Anchor search half-width for aperiodic regions.
        #[arg(long)]
        search: Option<f64>,
        #[arg(long)]
        raster_step: Option<f64>,
    },
    /// Run a sampling-ratio experiment from a JSON config.
    SamplingRatio {
        #[arg(long)]
        config: PathBuf,
    },
    /// Measure frame bounds on a truncated subspace from a JSON config.
    FrameBounds {
        #[arg(long)]
        config: PathBuf,
    },
    /// Estimate the smallest numerical constant consistent with a directory
    /// of experiment reports.
    Calibrate {
        #[arg(long)]
        reports: PathBuf,
    },
}

fn log_json(v: LogValue) -> Value {
    json!({ "ln": v.ln, "log10": v.log10(), "value": v.value })
}

fn print(v: &Value) -> Result<()> {
    println!("{}", serde_json::to_string_pretty(v)?);
    Ok(())
}

/// Decimal rendering with `digits` significant digits.
fn significant(v: f64, digits: usize) -> String {
    if v == 0.0 || !v.is_finite() {
        return format!("{v}");
    }
    let mag = v.abs().log10().floor() as i64;
    let decimals = (digits as i64 - 1 - mag).max(0) as usize;
    format!("{v:.decimals$}")
}

fn need(v: Option<f64>, name: &str) -> Result<f64> {
    v.with_context(|| format!("--{name} is required"))
}

#[allow(clippy::too_many_arguments)]
fn constants(
    nu_args: Option<Vec<f64>>,
    theorem: Option<Theorem>,
    n: usize,
    radius: Option<f64>,
    gamma: Option<f64>,
    p: f64,
    window: &str,
    c_numerical: f64,
) -> Result<bool> {
    if let Some(a) = nu_args {
        if a[0] < 0.0 || a[0].fract() != 0.0 {
            bail!("n must be a nonnegative integer");
        }
        println!("{}", significant(nu(a[0] as usize, a[1])?, 12));
        return Ok(true);
    }
    let theorem = theorem.context("either --nu or --theorem is required")?;
    let r = need(radius, "R")?;
    let out = match theorem {
        Theorem::Main => {
            let cal = CalibrationConstants { c_numerical, ..Default::default() };
            let b = thm_main_bound(n, r, need(gamma, "gamma")?, p, &cal)?;
            json!({
                "n": n, "R": r, "gamma": gamma, "p": p, "C": c_numerical,
                "nu": b.nu, "sigma": b.sigma, "b": b.b,
                "eta": log_json(b.eta()), "bound": log_json(b.bound()),
            })
        }
        Theorem::Sunzhou => {
            let s = sunzhou_check(&WindowSpec::parse(window)?, r)?;
            serde_json::to_value(s)?
        }
        Theorem::Compact => serde_json::to_value(compact_frame_bounds(&WindowSpec::parse(window)?, r)?)?,
        Theorem::Planar => {
            let g = WindowSpec::parse(window)?;
            let c = planar_sampling_bound(&g, r, need(gamma, "gamma")?)?;
            json!({ "R": r, "gamma": gamma, "frame": compact_frame_bounds(&g, r)?, "C": c })
        }
    };
    print(&out)?;
    Ok(true)
}

fn run(cli: Cli) -> Result<bool> {
    match cli.command {
        Command::Constants { nu, theorem, n, radius, gamma, p, window, c_numerical } => {
            constants(nu, theorem, n, radius, gamma, p, &window, c_numerical)
        }
        Command::Stft { signal, window, trunc, step, out } => {
            let text = std::fs::read_to_string(&signal).with_context(|| format!("reading {}", signal.display()))?;
            let desc: SignalDesc = serde_json::from_str(&text)?;
            let f = Signal::from_desc(desc)?;
            let grid = STFTGrid::compute(&f, &WindowSpec::parse(&window)?, trunc, step)?;
            grid.write_csv(&out)?;
            Ok(true)
        }
        Command::Remez { poly, region, rho, radius, kappa, c } => {
            let text = std::fs::read_to_string(&poly).with_context(|| format!("reading {}", poly.display()))?;
            let f: PolyFunction = serde_json::from_str(&text)?;
            let report = remez_ratio(&f, &parse_region(&region)?, rho, radius, kappa, c)?;
            print(&serde_json::to_value(&report)?)?;
            Ok(report.verdict.is_pass())
        }
        Command::Density { region, radius, mode, search, raster_step } => {
            let mode = match mode {
                Mode::Square => DensityMode::Square,
                Mode::Disc => DensityMode::Disc,
            };
            let mut q = DensityQuery::new(radius, mode);
            if let Some(s) = raster_step {
                q = q.with_raster_step(s);
            }
            if let Some(w) = search {
                q = q.with_search_window(w);
            }
            print(&serde_json::to_value(density_gamma(&parse_region(&region)?, &q)?)?)?;
            Ok(true)
        }
        Command::SamplingRatio { config } => {
            let cfg = ExperimentConfig::from_json_file(&config)?;
            let record = run_sampling_experiment(&cfg)?;
            let rows: Vec<Value> = record
                .reports
                .iter()
                .map(|r| json!({ "ratio": r.details.get("ratio"), "bound_log": r.theoretical_log, "verdict": r.verdict }))
                .collect();
            print(&json!({ "gamma": record.density.gamma_conservative, "reports": rows }))?;
            Ok(record.all_pass())
        }
        Command::FrameBounds { config } => {
            let text = std::fs::read_to_string(&config).with_context(|| format!("reading {}", config.display()))?;
            let exp: FrameExperiment = serde_json::from_str(&text)?;
            let fb = empirical_frame_bounds(&exp)?;
            print(&serde_json::to_value(&fb)?)?;
            Ok(fb.all_pass())
        }
        Command::Calibrate { reports } => {
            let records = read_records(&reports)?;
            let all: Vec<_> = records.into_iter().flat_map(|r| r.reports).collect();
            print(&serde_json::to_value(calibrate_constants(&all)?)?)?;
            Ok(true)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
