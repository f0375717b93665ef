use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::poly::PolyFunction;
use crate::error::{Error, Result};
use crate::geometry::Region;

/// Exponent of the Gaussian-weighted norm
/// `‖F‖_p = (∫ |F|^p e^{-πp|z|²/2} dz)^{1/p}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WeightedNormSpec {
    p: f64,
}

impl WeightedNormSpec {
    pub fn new(p: f64) -> Result<Self> {
        if !(p >= 1.0) || !p.is_finite() {
            return Err(Error::domain(format!("weighted norm needs 1 <= p < inf, got {p}")));
        }
        Ok(Self { p })
    }

    pub fn p(&self) -> f64 {
        self.p
    }
}

/// Cells per half-axis of the default midpoint grid.
const DEFAULT_CELLS: usize = 256;

/// Weighted `L^p` norm over `region ∩ D(0, trunc)` (`None` for the whole
/// plane) by the midpoint rule on a `512 × 512` grid.
pub fn weighted_lp_norm(f: &PolyFunction, spec: WeightedNormSpec, region: Option<&Region>, trunc: f64) -> Result<f64> {
    weighted_lp_norm_with(f, spec, region, trunc, trunc / DEFAULT_CELLS as f64)
}

pub fn weighted_lp_norm_with(
    f: &PolyFunction,
    spec: WeightedNormSpec,
    region: Option<&Region>,
    trunc: f64,
    step: f64,
) -> Result<f64> {
    if !(trunc > 0.0) || !(step > 0.0) {
        return Err(Error::domain("truncation radius and step must be positive"));
    }
    let p = spec.p;
    let n = (2.0 * trunc / step).ceil() as usize;
    let h = 2.0 * trunc / n as f64;
    let rows: Vec<f64> = (0..n)
        .into_par_iter()
        .map(|i| {
            let x = -trunc + (i as f64 + 0.5) * h;
            let mut acc = 0.0;
            for j in 0..n {
                let y = -trunc + (j as f64 + 0.5) * h;
                let r2 = x * x + y * y;
                if r2 > trunc * trunc || !region.is_none_or(|r| r.contains(x, y)) {
                    continue;
                }
                let v = f.eval(Complex64::new(x, y)).norm();
                acc += (v * (-PI * r2 / 2.0).exp()).powf(p);
            }
            acc
        })
        .collect();
    // ordered sum keeps the result independent of scheduling
    let total: f64 = rows.iter().sum();
    Ok((total * h * h).powf(1.0 / p))
}
