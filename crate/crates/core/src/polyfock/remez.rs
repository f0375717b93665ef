use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::poly::{polar_points, sup_on_disc, PolyFunction, SupResolution};
use crate::bounds::{real, BoundReport, Verdict, LOG_SLACK};
use crate::error::{Error, Result};
use crate::geometry::Region;

/// Pixels per unit `R` along each axis when rasterizing `Ω`.
const RASTER_PER_R: usize = 256;

/// Result of comparing `sup_{D(0,ρ)} |F|` with
/// `(κ|D(0,ρ)|/|Ω|)^{c[ln(M/m) + (n+2)² ln 4(n+2)]} sup_Ω |F|`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RemezReport {
    /// `|F(0)|`
    pub m: f64,
    /// Certified upper bound of `sup_{D(0,4R)} |F|`.
    #[serde(rename = "M")]
    pub big_m: f64,
    pub sup_left: f64,
    pub sup_omega: f64,
    #[serde(with = "real")]
    pub sup_right_log: f64,
    #[serde(with = "real::option")]
    pub sup_right: Option<f64>,
    pub omega_area: f64,
    pub omega_area_error: f64,
    pub disc_area: f64,
    /// `c[ln(M/m) + (n+2)² ln 4(n+2)]`
    pub exponent: f64,
    /// `ln(sup_left/sup_Ω) / ln(κ|D(0,ρ)|/|Ω|)`, when the denominator is
    /// positive.
    #[serde(with = "real::option")]
    pub c_hat: Option<f64>,
    /// `c_hat / [ln(M/m) + (n+2)² ln 4(n+2)]`, the smallest `c` that the
    /// sampled data would accept.
    #[serde(with = "real::option")]
    pub c_eff: Option<f64>,
    pub rho: f64,
    #[serde(rename = "R")]
    pub radius: f64,
    pub kappa: f64,
    pub c: f64,
    pub n: usize,
    pub verdict: Verdict,
}

impl RemezReport {
    pub fn bound_report(&self) -> BoundReport {
        let mut r = BoundReport::compare(
            "remez_ratio",
            "sup_D(0,rho)|F| <= (kappa|D(0,rho)|/|Omega|)^(c[ln(M/m)+(n+2)^2 ln 4(n+2)]) sup_Omega|F|",
            self.sup_left.ln(),
            self.sup_right_log,
            LOG_SLACK,
        )
        .input("rho", self.rho)
        .input("R", self.radius)
        .input("kappa", self.kappa)
        .input("c", self.c)
        .input("n", self.n as f64)
        .detail("m", self.m)
        .detail("M", self.big_m)
        .detail("sup_omega", self.sup_omega)
        .detail("omega_area", self.omega_area)
        .detail("exponent", self.exponent);
        if let Some(v) = self.c_hat {
            r = r.detail("c_hat", v);
        }
        if let Some(v) = self.c_eff {
            r = r.detail("c_eff", v);
        }
        r.verdict = self.verdict;
        r
    }
}

struct OmegaRaster {
    area: f64,
    error: f64,
    sup: f64,
}

/// Rasterizes `Ω` on `[-2R, 2R]²`, checks `Ω ⊂ D(0, R)` and collects `|Ω|`
/// and the sampled `sup_Ω |F|`.
fn rasterize_omega(f: &PolyFunction, region: &Region, radius: f64) -> Result<OmegaRaster> {
    let n = 4 * RASTER_PER_R;
    let h = 4.0 * radius / n as f64;
    let centre = |i: usize| -2.0 * radius + (i as f64 + 0.5) * h;
    let rows: Vec<Vec<bool>> = (0..n)
        .into_par_iter()
        .map(|i| (0..n).map(|j| region.contains(centre(i), centre(j))).collect())
        .collect();
    let slack = radius + h;
    let mut count = 0usize;
    let mut edge = 0usize;
    let mut sup: f64 = 0.0;
    for i in 0..n {
        for j in 0..n {
            if !rows[i][j] {
                continue;
            }
            let (x, y) = (centre(i), centre(j));
            if x.hypot(y) > slack || i == 0 || j == 0 || i + 1 == n || j + 1 == n {
                return Err(Error::precondition("the region must lie inside D(0, R)"));
            }
            count += 1;
            if !(rows[i - 1][j] && rows[i + 1][j] && rows[i][j - 1] && rows[i][j + 1]) {
                edge += 1;
            }
            sup = sup.max(f.eval(Complex64::new(x, y)).norm());
        }
    }
    Ok(OmegaRaster { area: count as f64 * h * h, error: edge as f64 * h * h, sup })
}

/// Evaluates both sides of the polyanalytic Remez inequality for supplied
/// constants `(κ, c)` and reports the effective exponent.
///
/// Suprema over discs are sampled on a 512 × 512 polar grid; `M` is
/// inflated by the Lipschitz correction so that it bounds the true sup,
/// and `|Ω|` in the verdict is the raster area minus its error bound.
pub fn remez_ratio(
    f: &PolyFunction,
    region: &Region,
    rho: f64,
    radius: f64,
    kappa: f64,
    c: f64,
) -> Result<RemezReport> {
    remez_ratio_with(f, region, rho, radius, kappa, c, SupResolution::DEFAULT)
}

#[allow(clippy::too_many_arguments)]
pub fn remez_ratio_with(
    f: &PolyFunction,
    region: &Region,
    rho: f64,
    radius: f64,
    kappa: f64,
    c: f64,
    res: SupResolution,
) -> Result<RemezReport> {
    if !(radius > 0.0) || !(rho > 0.0) || rho > radius {
        return Err(Error::domain("need 0 < rho <= R"));
    }
    if !(kappa >= 1.0) || !(c > 0.0) {
        return Err(Error::domain("need kappa >= 1 and c > 0"));
    }
    let m = f.eval(Complex64::new(0.0, 0.0)).norm();
    if m == 0.0 {
        return Err(Error::precondition("|F(0)| must be positive"));
    }
    let omega = rasterize_omega(f, region, radius)?;
    if omega.area == 0.0 {
        return Err(Error::domain("the region has zero measure"));
    }
    let n = f.order();
    let big_m = sup_on_disc(|z| f.eval(z), 4.0 * radius, res, f.lipschitz_bound(4.0 * radius)).upper;
    let left = sup_on_disc(|z| f.eval(z), rho, res, 0.0).sampled;
    // polar samples of D(0,ρ) that fall in Ω are points of Ω too
    let sup_omega = polar_points(rho, res)
        .filter(|z| region.contains(z.re, z.im))
        .map(|z| f.eval(z).norm())
        .fold(omega.sup, f64::max);

    let np2 = (n + 2) as f64;
    let bracket = (big_m / m).ln() + np2 * np2 * (4.0 * np2).ln();
    let exponent = c * bracket;
    let disc_area = PI * rho * rho;
    let area_low = if omega.area - omega.error > 0.0 { omega.area - omega.error } else { omega.area };
    let ln_base = (kappa * disc_area / area_low).ln();
    let sup_right_log = exponent * ln_base + sup_omega.ln();
    let verdict = if left.ln() <= sup_right_log + LOG_SLACK { Verdict::Pass } else { Verdict::Fail };

    let ln_base_central = (kappa * disc_area / omega.area).ln();
    let c_hat = (ln_base_central > 0.0).then(|| (left / sup_omega).ln() / ln_base_central);
    let c_eff = c_hat.map(|v| v / bracket);
    let sup_right = Some(sup_right_log.exp()).filter(|v| v.is_finite());
    Ok(RemezReport {
        m,
        big_m,
        sup_left: left,
        sup_omega,
        sup_right_log,
        sup_right,
        omega_area: omega.area,
        omega_area_error: omega.error,
        disc_area,
        exponent,
        c_hat,
        c_eff,
        rho,
        radius,
        kappa,
        c,
        n,
        verdict,
    })
}
