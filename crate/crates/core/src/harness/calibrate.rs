use crate::bounds::{thm_main_bound, BoundReport, CalibrationConstants};
use crate::error::{Error, Result};

use super::sampling::HERMITE_REPORT;

const C_TOL: f64 = 1e-3;
const C_CEILING: f64 = 1e12;

struct Observation {
    n: usize,
    radius: f64,
    gamma: f64,
    p: f64,
    ln_ratio: f64,
}

fn observation(r: &BoundReport) -> Result<Observation> {
    let get = |k: &str| {
        r.inputs
            .get(k)
            .copied()
            .ok_or_else(|| Error::domain(format!("report '{}' lacks input '{k}'", r.name)))
    };
    let ln_ratio = r
        .empirical_log
        .ok_or_else(|| Error::domain(format!("report '{}' has no empirical value", r.name)))?;
    Ok(Observation { n: get("n")? as usize, radius: get("R")?, gamma: get("gamma")?, p: get("p")?, ln_ratio })
}

fn satisfied(obs: &[Observation], c: f64) -> Result<bool> {
    let cal = CalibrationConstants { c_numerical: c, ..Default::default() };
    for o in obs {
        if o.ln_ratio > thm_main_bound(o.n, o.radius, o.gamma, o.p, &cal)?.bound_log {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Smallest `C ≥ 1` (to within 1e-3) for which every Hermite-window report
/// satisfies `ratio ≤ η (γ/C)^{-σ}`. The bound increases with `C` on
/// `C ≥ 1` because `γ ≤ 1`, so bisection applies. The result is an
/// empirical lower bound on any valid `C`, not an estimate of the true one.
pub fn calibrate_constants(reports: &[BoundReport]) -> Result<CalibrationConstants> {
    let obs: Vec<Observation> = reports
        .iter()
        .filter(|r| r.name == HERMITE_REPORT && r.empirical_log.is_some_and(f64::is_finite))
        .map(observation)
        .collect::<Result<_>>()?;
    if obs.is_empty() {
        return Err(Error::domain("calibration needs at least one Hermite-window report"));
    }
    let c = if satisfied(&obs, 1.0)? {
        1.0
    } else {
        let mut hi = 2.0;
        while !satisfied(&obs, hi)? {
            hi *= 2.0;
            if hi > C_CEILING {
                return Err(Error::capability("no C below 1e12 satisfies the observed ratios"));
            }
        }
        let mut lo = hi / 2.0;
        while hi - lo > C_TOL {
            let mid = 0.5 * (lo + hi);
            if satisfied(&obs, mid)? {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        hi
    };
    Ok(CalibrationConstants { c_numerical: c, ..Default::default() })
}
