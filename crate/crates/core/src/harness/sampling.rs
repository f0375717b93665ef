use std::path::Path;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::config::ExperimentConfig;
use crate::bounds::{planar_sampling_bound, real, thm_main_bound, BoundReport, Verdict};
use crate::error::{Error, Result};
use crate::geometry::{density_gamma, DensityMode, DensityQuery, DensityResult};
use crate::tfcore::{lp_norm, STFTGrid};

pub const HERMITE_REPORT: &str = "hermite_sampling";
pub const PLANAR_REPORT: &str = "planar_sampling";

/// One experiment: the config that produced it, the density scan, and one
/// report per signal.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentRecord {
    pub config: ExperimentConfig,
    pub density: DensityResult,
    pub reports: Vec<BoundReport>,
}

impl ExperimentRecord {
    pub fn all_pass(&self) -> bool {
        self.reports.iter().all(|r| r.passed())
    }
}

/// Flat per-signal row of the CSV summary.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SummaryRow {
    pub signal: usize,
    pub report: String,
    #[serde(with = "real")]
    pub ratio: f64,
    #[serde(with = "real")]
    pub bound_log: f64,
    pub gamma: f64,
    pub verdict: Verdict,
}

/// Computes `ρ(f) = ‖V_g f‖_{L^p(ALL)} / ‖V_g f‖_{L^p(Ω)}` on the configured
/// grid for each signal and compares it with the applicable bound:
///
/// * Hermite window `h_n`: `ρ ≤ η (γ/C)^{-σ}` with disc density `γ`;
/// * compactly supported window, `p = 2`: `ρ² ≤ C_samp(γ)` with square
///   density `γ`, since the planar sampling constant bounds squared norms.
///
/// `γ` is the scan value reduced by its rasterization error. When it is 0
/// no finite bound applies and the reports are informational.
pub fn run_sampling_experiment(cfg: &ExperimentConfig) -> Result<ExperimentRecord> {
    cfg.validate()?;
    let g = cfg.window_spec()?;
    let region = cfg.parsed_region()?;
    let mode = if g.is_hermite() { DensityMode::Disc } else { DensityMode::Square };
    if !g.is_hermite() && cfg.p != 2.0 {
        return Err(Error::capability("compactly supported windows are covered for p = 2 only"));
    }
    let mut q = DensityQuery::new(cfg.radius, mode);
    if let Some(s) = cfg.raster_step {
        q = q.with_raster_step(s);
    }
    if let Some(w) = cfg.search_half_width {
        q = q.with_search_window(w);
    }
    let density = density_gamma(&region, &q)?;
    let gamma = density.gamma_conservative;

    // bound_log, σ-or-NaN, η_log-or-NaN
    let bound: Option<(f64, f64, f64)> = if gamma <= 0.0 {
        None
    } else if let Some(n) = g.hermite_index() {
        let b = thm_main_bound(n.get(), cfg.radius, gamma, cfg.p, &cfg.calibration)?;
        Some((b.bound_log, b.sigma, b.eta_log))
    } else {
        Some((planar_sampling_bound(&g, cfg.radius, gamma)?.ln(), f64::NAN, f64::NAN))
    };

    let signals = cfg.signals.materialize()?;
    let g_norm = g.norms().l2;
    let reports = signals
        .par_iter()
        .enumerate()
        .map(|(idx, f)| {
            let grid = STFTGrid::compute(f, &g, cfg.trunc, cfg.step)?;
            let all = lp_norm(&grid, cfg.p, None)?;
            let omega = lp_norm(&grid, cfg.p, Some(&region))?;
            let ratio = if omega > 0.0 { all / omega } else { f64::INFINITY };
            let (name, statement, emp_log) = if g.is_hermite() {
                (HERMITE_REPORT, "||V f||_Lp(C) <= eta (gamma/C)^(-sigma) ||V f||_Lp(Omega)", ratio.ln())
            } else {
                (PLANAR_REPORT, "||V f||^2_L2(C) <= C_samp(gamma) ||V f||^2_L2(Omega)", 2.0 * ratio.ln())
            };
            let mut r = match bound {
                Some((blog, _, _)) => BoundReport::compare(name, statement, emp_log, blog, cfg.tolerance.ln_1p()),
                None => BoundReport::informational(name, format!("{statement}; gamma = 0, no finite bound"))
                    .with_empirical_log(emp_log)
                    .with_theoretical_log(f64::INFINITY),
            };
            r = r
                .input("signal", idx as f64)
                .input("R", cfg.radius)
                .input("p", cfg.p)
                .input("gamma", gamma)
                .input("C_numerical", cfg.calibration.c_numerical)
                .input("kappa", cfg.calibration.kappa)
                .input("c_brudnyi", cfg.calibration.c_brudnyi)
                .detail("ratio", ratio)
                .detail("norm_all", all)
                .detail("norm_omega", omega)
                .detail("gamma_scan", density.gamma)
                .detail("fraction_error", density.fraction_error)
                .detail("boundary_ratio", grid.boundary_ratio());
            if let Some(n) = g.hermite_index() {
                r = r.input("n", n.get() as f64);
            }
            if let Some(seed) = cfg.signals.seed() {
                r = r.input("seed", seed as f64);
            }
            if let Some((_, sigma, eta_log)) = bound {
                if g.is_hermite() {
                    r = r.detail("sigma", sigma).detail("eta_log", eta_log);
                }
            }
            if cfg.p == 2.0 {
                r = r.detail("isometry_defect", (all / (f.norm_l2() * g_norm) - 1.0).abs());
            }
            if omega == 0.0 && all > 0.0 {
                r = r.detail("omega_misses_grid", 1.0);
            }
            Ok(r)
        })
        .collect::<Result<Vec<_>>>()?;

    let record = ExperimentRecord { config: cfg.clone(), density, reports };
    if let Some(path) = &cfg.output {
        write_record(&record, path)?;
    }
    Ok(record)
}

pub fn summary_rows(record: &ExperimentRecord) -> Vec<SummaryRow> {
    record
        .reports
        .iter()
        .enumerate()
        .map(|(i, r)| SummaryRow {
            signal: i,
            report: r.name.clone(),
            ratio: r.details.get("ratio").copied().unwrap_or(f64::NAN),
            bound_log: r.theoretical_log.unwrap_or(f64::NAN),
            gamma: r.inputs.get("gamma").copied().unwrap_or(f64::NAN),
            verdict: r.verdict,
        })
        .collect()
}

/// Writes the JSON record to `path` and the CSV summary to `path` with
/// extension `csv`.
pub fn write_record(record: &ExperimentRecord, path: &Path) -> Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir)?;
    }
    std::fs::write(path, serde_json::to_string_pretty(record)?)?;
    let mut w = csv::Writer::from_path(path.with_extension("csv"))?;
    for row in summary_rows(record) {
        w.serialize(row)?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_record(path: &Path) -> Result<ExperimentRecord> {
    Ok(serde_json::from_str(&std::fs::read_to_string(path)?)?)
}

/// Reads every `*.json` experiment record in `dir`, sorted by file name.
pub fn read_records(dir: &Path) -> Result<Vec<ExperimentRecord>> {
    let mut paths: Vec<_> = std::fs::read_dir(dir)?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|e| e == "json"))
        .collect();
    paths.sort();
    paths.iter().map(|p| read_record(p)).collect()
}

/// Reruns the embedded config (without writing output) and reports whether
/// every number matches bit for bit.
pub fn replay(record: &ExperimentRecord) -> Result<bool> {
    let mut cfg = record.config.clone();
    cfg.output = None;
    let again = run_sampling_experiment(&cfg)?;
    let same = |a: &ExperimentRecord, b: &ExperimentRecord| {
        serde_json::to_string(&a.density).ok() == serde_json::to_string(&b.density).ok()
            && serde_json::to_string(&a.reports).ok() == serde_json::to_string(&b.reports).ok()
    };
    Ok(same(&again, record))
}
