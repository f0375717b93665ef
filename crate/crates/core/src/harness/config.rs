use std::path::{Path, PathBuf};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::bounds::CalibrationConstants;
use crate::error::{Error, Result};
use crate::geometry::{parse_region, Region};
use crate::specfun::{WindowDesc, WindowSpec, EXPANSION_CAP};
use crate::tfcore::{Signal, SignalDesc};

pub const DEFAULT_TOLERANCE: f64 = 0.05;

/// Signals analysed by one experiment.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SignalFamily {
    /// `count` unit-norm expansions `Σ_{k ≤ degree} a_k h_k` with Gaussian
    /// coefficients drawn from a ChaCha8 stream seeded by `seed`.
    Random { degree: usize, count: usize, seed: u64 },
    /// A JSON file holding one signal description or an array of them.
    File { path: PathBuf },
    /// Signals given inline.
    Inline { signals: Vec<SignalDesc> },
}

impl SignalFamily {
    pub fn materialize(&self) -> Result<Vec<Signal>> {
        match self {
            SignalFamily::Random { degree, count, seed } => {
                if *degree > EXPANSION_CAP {
                    return Err(Error::capability(format!("expansion degree is capped at {EXPANSION_CAP}")));
                }
                let mut rng = ChaCha8Rng::seed_from_u64(*seed);
                (0..*count).map(|_| Signal::random_expansion(*degree, &mut rng)).collect()
            }
            SignalFamily::File { path } => {
                let text = std::fs::read_to_string(path)?;
                let value: serde_json::Value = serde_json::from_str(&text)?;
                let descs: Vec<SignalDesc> = if value.is_array() {
                    serde_json::from_value(value)?
                } else {
                    vec![serde_json::from_value(value)?]
                };
                descs.into_iter().map(Signal::from_desc).collect()
            }
            SignalFamily::Inline { signals } => signals.iter().cloned().map(Signal::from_desc).collect(),
        }
    }

    pub fn seed(&self) -> Option<u64> {
        match self {
            SignalFamily::Random { seed, .. } => Some(*seed),
            _ => None,
        }
    }
}

fn default_tolerance() -> f64 {
    DEFAULT_TOLERANCE
}

/// Everything needed to rerun a sampling-ratio experiment. The config is
/// embedded verbatim in its report, so a report can be replayed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub window: WindowDesc,
    pub signals: SignalFamily,
    /// Region in prefix syntax, e.g. `"(strips 0.2 0.4)"`.
    pub region: String,
    #[serde(rename = "R")]
    pub radius: f64,
    pub p: f64,
    /// Half-width of the phase-space truncation square.
    pub trunc: f64,
    /// Grid step; must divide `2·trunc`.
    pub step: f64,
    #[serde(default)]
    pub calibration: CalibrationConstants,
    /// Relative tolerance of the verdicts.
    #[serde(default = "default_tolerance")]
    pub tolerance: f64,
    /// Anchor search half-width for regions that are aperiodic in some
    /// direction.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub search_half_width: Option<f64>,
    /// Rasterization step of the density scan (default `R/64`).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub raster_step: Option<f64>,
    /// JSON report path; the CSV summary goes next to it.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output: Option<PathBuf>,
}

impl ExperimentConfig {
    pub fn from_json_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Ok(serde_json::from_str(&text)?)
    }

    pub fn window_spec(&self) -> Result<WindowSpec> {
        WindowSpec::from_desc(&self.window)
    }

    pub fn parsed_region(&self) -> Result<Region> {
        parse_region(&self.region)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.radius > 0.0) || !self.radius.is_finite() {
            return Err(Error::domain("R must be positive"));
        }
        if !(self.p >= 1.0) || !self.p.is_finite() {
            return Err(Error::domain("p must lie in [1, inf)"));
        }
        if !(self.trunc > 0.0 && self.step > 0.0) {
            return Err(Error::domain("trunc and step must be positive"));
        }
        if !(self.tolerance >= 0.0) || !self.tolerance.is_finite() {
            return Err(Error::domain("tolerance must be finite and nonnegative"));
        }
        self.calibration.validate()?;
        self.parsed_region()?;
        self.window_spec()?;
        Ok(())
    }
}
